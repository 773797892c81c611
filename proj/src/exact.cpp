#include "ssep/exact.hpp"

#include <cmath>
#include <cstdlib>
#include <vector>

#include <Eigen/LU>

namespace ssep {

std::uint64_t exact_state_cap()
{
    const char* env = std::getenv(kStateCapEnv);
    if (env == nullptr || *env == '\0')
        return kDefaultStateCap;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || v == 0)
        return kDefaultStateCap;
    return static_cast<std::uint64_t>(v);
}

Eigen::VectorXd Generator::exit_rates() const
{
    Eigen::VectorXd out(dimension());
    for (Eigen::Index i = 0; i < rates.outerSize(); ++i) {
        double s = 0.0;
        for (decltype(rates)::InnerIterator it(rates, i); it; ++it)
            s += it.value();
        out(i) = s;
    }
    return out;
}

Eigen::MatrixXd Generator::dense() const
{
    Eigen::MatrixXd q = Eigen::MatrixXd(rates);
    q.diagonal() = -exit_rates();
    return q;
}

Eigen::VectorXd Generator::row_sums() const
{
    Eigen::VectorXd out(dimension());
    const Eigen::VectorXd exit = exit_rates();
    for (Eigen::Index i = 0; i < rates.outerSize(); ++i) {
        double s = -exit(i);
        for (decltype(rates)::InnerIterator it(rates, i); it; ++it)
            s += it.value();
        out(i) = s;
    }
    return out;
}

Generator build_generator(const ModelParams& params, std::uint64_t cap)
{
    const std::uint64_t m = state_space_size(params, cap);
    const auto dim = static_cast<Eigen::Index>(m);

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(m * static_cast<std::uint64_t>(2 * params.n_sites + 2));
    std::vector<RatedEvent> events;
    for (std::uint64_t s = 0; s < m; ++s) {
        const LatticeState x = decode({s}, params);
        enabled_events_into(x, params, events);
        for (const RatedEvent& e : events) {
            const StateIndex t = encode(apply_event(x, e.event), params);
            triplets.emplace_back(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t.value),
                                  e.rate);
        }
    }
    Generator gen{params, Eigen::SparseMatrix<double, Eigen::RowMajor>(dim, dim)};
    gen.rates.setFromTriplets(triplets.begin(), triplets.end());
    gen.rates.makeCompressed();
    return gen;
}

namespace {

std::vector<bool> reachable(const Eigen::SparseMatrix<double, Eigen::RowMajor>& adj, Eigen::Index start)
{
    std::vector<bool> seen(static_cast<std::size_t>(adj.rows()), false);
    std::vector<Eigen::Index> stack{start};
    seen[static_cast<std::size_t>(start)] = true;
    while (!stack.empty()) {
        const Eigen::Index v = stack.back();
        stack.pop_back();
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(adj, v); it; ++it) {
            if (it.value() > 0.0 && !seen[static_cast<std::size_t>(it.col())]) {
                seen[static_cast<std::size_t>(it.col())] = true;
                stack.push_back(it.col());
            }
        }
    }
    return seen;
}

bool all_of(const std::vector<bool>& v)
{
    for (bool b : v)
        if (!b)
            return false;
    return true;
}

}  // namespace

bool is_irreducible(const Generator& gen)
{
    if (gen.dimension() == 0)
        return false;
    if (!all_of(reachable(gen.rates, 0)))
        return false;
    const Eigen::SparseMatrix<double, Eigen::RowMajor> transposed = gen.rates.transpose();
    return all_of(reachable(transposed, 0));
}

std::string to_string(SolveMethod method)
{
    return method == SolveMethod::DenseLU ? "dense-lu" : "uniformized-power";
}

SolveMethod solve_method(const Generator& gen, const SolveOptions& options)
{
    return gen.dimension() <= options.dense_limit ? SolveMethod::DenseLU
                                                  : SolveMethod::UniformizedPower;
}

Eigen::VectorXd balance_residual(const Generator& gen, const Distribution& dist)
{
    if (dist.size() != gen.dimension())
        throw InvalidStateError("distribution has " + std::to_string(dist.size()) +
                                " entries, generator has " + std::to_string(gen.dimension()));
    const Eigen::VectorXd inflow = gen.rates.transpose() * dist;
    return dist.cwiseProduct(gen.exit_rates()) - inflow;
}

namespace {

Distribution solve_dense(const Generator& gen)
{
    const Eigen::Index m = gen.dimension();
    Eigen::MatrixXd a = gen.dense().transpose();
    a.row(m - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
    b(m - 1) = 1.0;

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    Distribution p = lu.solve(b);
    if (!p.allFinite() || (a * p - b).lpNorm<Eigen::Infinity>() > 1e-8)
        throw SingularSystemError("balance system is singular or ill-conditioned");
    return p;
}

Distribution solve_power(const Generator& gen, const SolveOptions& options)
{
    const Eigen::Index m = gen.dimension();
    const Eigen::VectorXd exit = gen.exit_rates();
    const double lambda = 1.05 * exit.maxCoeff();
    const Eigen::SparseMatrix<double, Eigen::RowMajor> incoming = gen.rates.transpose();

    Distribution p = Distribution::Constant(m, 1.0 / static_cast<double>(m));
    Eigen::VectorXd flow(m);
    for (long it = 0; it < options.max_iterations; ++it) {
        flow.noalias() = incoming * p;
        flow -= p.cwiseProduct(exit);  // (pQ)^T
        if (it % 64 == 0) {
            if (flow.lpNorm<Eigen::Infinity>() <= options.tolerance)
                return p / p.sum();
            p /= p.sum();
        }
        p += flow / lambda;
    }
    throw NonConvergenceError("uniformized power iteration did not reach residual " +
                              std::to_string(options.tolerance) + " within " +
                              std::to_string(options.max_iterations) + " iterations");
}

}  // namespace

Distribution solve_stationary(const Generator& gen, const SolveOptions& options)
{
    if (!is_irreducible(gen))
        throw ReducibleChainError("transition graph is not strongly connected; "
                                  "the stationary distribution is not unique and positive");
    Distribution p = solve_method(gen, options) == SolveMethod::DenseLU ? solve_dense(gen)
                                                                       : solve_power(gen, options);
    if ((p.array() <= 0.0).any())
        throw SingularSystemError("solved distribution has non-positive entries");
    return p;
}

}  // namespace ssep
