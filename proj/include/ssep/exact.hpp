#ifndef SSEP_EXACT_HPP
#define SSEP_EXACT_HPP

#include <cstdint>
#include <string>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "ssep/model.hpp"

namespace ssep {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Probability vector over all states, indexed by StateIndex.
using Distribution = Eigen::VectorXd;

/// Entry 0 is the vacancy probability, entry k the type-k occupancy.
template <typename Scalar = double>
using SiteMarginal = VectorX<Scalar>;

class ReducibleChainError : public Error {
public:
    using Error::Error;
};

class SingularSystemError : public Error {
public:
    using Error::Error;
};

class NonConvergenceError : public Error {
public:
    using Error::Error;
};

/// Default limit of the exact engine on the number of states (2^24).
inline constexpr std::uint64_t kDefaultStateCap = std::uint64_t{1} << 24;

/// Name of the environment variable overriding kDefaultStateCap.
inline constexpr const char* kStateCapEnv = "SSEP_STATE_CAP";

/// The active state cap: SSEP_STATE_CAP if set and valid, otherwise the default.
std::uint64_t exact_state_cap();

/// Off-diagonal transition rates of the chain. The diagonal is implied as
/// the negative row sum and never stored.
struct Generator {
    ModelParams params;
    Eigen::SparseMatrix<double, Eigen::RowMajor> rates;

    Eigen::Index dimension() const { return rates.rows(); }
    double rate(Eigen::Index from, Eigen::Index to) const { return rates.coeff(from, to); }
    /// Total outgoing rate of each state.
    Eigen::VectorXd exit_rates() const;
    /// Full generator with the diagonal filled in.
    Eigen::MatrixXd dense() const;
    /// Rows of the full generator summed; zero up to rounding.
    Eigen::VectorXd row_sums() const;
};

/// One entry per ordered state pair reachable by a single event.
Generator build_generator(const ModelParams& params, std::uint64_t cap = exact_state_cap());

/// Strong connectivity of the transition graph.
bool is_irreducible(const Generator& gen);

struct SolveOptions {
    Eigen::Index dense_limit = 4096;  // largest M solved by dense LU
    double tolerance = 1e-12;         // iterative path: max balance residual
    long max_iterations = 5'000'000;
};

enum class SolveMethod { DenseLU, UniformizedPower };

std::string to_string(SolveMethod method);
SolveMethod solve_method(const Generator& gen, const SolveOptions& options = {});

/// Stationary distribution of an irreducible generator.
///
/// Up to `dense_limit` states the balance system is solved directly with the
/// last balance row replaced by the normalization row. Larger chains are
/// iterated with the uniformized transition operator I + Q/L until the
/// balance residual drops below `tolerance`.
Distribution solve_stationary(const Generator& gen, const SolveOptions& options = {});

/// Per-state residual p_i sum_j q_ij - sum_j p_j q_ji.
Eigen::VectorXd balance_residual(const Generator& gen, const Distribution& dist);

template <typename Scalar = double>
Scalar rate_ratio_sum(const ModelParams& params)
{
    Scalar s(0);
    for (int k = 1; k <= params.n_types; ++k)
        s += Scalar(params.arrival(k)) / Scalar(params.departure(k));
    return s;
}

/// Probability of the all-vacant state, (1 + sum alpha_k/beta_k)^-N.
template <typename Scalar = double>
Scalar normalization_constant(const ModelParams& params)
{
    params.validate();
    using std::pow;
    return pow(Scalar(1) + rate_ratio_sum<Scalar>(params), -params.n_sites);
}

/// Closed-form single-site distribution; the same at every site.
template <typename Scalar = double>
SiteMarginal<Scalar> site_marginal(const ModelParams& params, int site)
{
    params.validate();
    if (site < 1 || site > params.n_sites)
        throw InvalidStateError("site " + std::to_string(site) + " outside [1, " +
                                std::to_string(params.n_sites) + "]");
    const Scalar denom = Scalar(1) + rate_ratio_sum<Scalar>(params);
    SiteMarginal<Scalar> m(params.n_types + 1);
    m(0) = Scalar(1) / denom;
    for (int k = 1; k <= params.n_types; ++k)
        m(k) = (Scalar(params.arrival(k)) / Scalar(params.departure(k))) / denom;
    return m;
}

/// Closed-form stationary distribution: C times the product of
/// alpha/beta over the occupied sites.
template <typename Scalar = double>
VectorX<Scalar> product_form(const ModelParams& params, std::uint64_t cap = exact_state_cap())
{
    const std::uint64_t m = state_space_size(params, cap);
    const Scalar c = normalization_constant<Scalar>(params);
    VectorX<Scalar> ratio(params.n_types + 1);
    ratio(0) = Scalar(1);
    for (int k = 1; k <= params.n_types; ++k)
        ratio(k) = Scalar(params.arrival(k)) / Scalar(params.departure(k));

    VectorX<Scalar> p(static_cast<Eigen::Index>(m));
    for (std::uint64_t s = 0; s < m; ++s) {
        const LatticeState x = decode({s}, params);
        Scalar w = c;
        for (int v : x.sites)
            w *= ratio(v);
        p(static_cast<Eigen::Index>(s)) = w;
    }
    return p;
}

/// Product of the per-site closed-form marginals.
template <typename Scalar = double>
VectorX<Scalar> joint_from_marginals(const ModelParams& params,
                                     std::uint64_t cap = exact_state_cap())
{
    const std::uint64_t m = state_space_size(params, cap);
    VectorX<Scalar> p(static_cast<Eigen::Index>(m));
    std::vector<SiteMarginal<Scalar>> marginals;
    for (int i = 1; i <= params.n_sites; ++i)
        marginals.push_back(site_marginal<Scalar>(params, i));
    for (std::uint64_t s = 0; s < m; ++s) {
        const LatticeState x = decode({s}, params);
        Scalar w(1);
        for (int i = 1; i <= params.n_sites; ++i)
            w *= marginals[i - 1](x.at(i));
        p(static_cast<Eigen::Index>(s)) = w;
    }
    return p;
}

/// N x (K+1) table of per-site marginals obtained by summing a joint
/// distribution; row i-1 belongs to site i.
template <typename Derived>
MatrixX<typename Derived::Scalar> marginals_of(const Eigen::MatrixBase<Derived>& dist,
                                               const ModelParams& params)
{
    using Scalar = typename Derived::Scalar;
    MatrixX<Scalar> out = MatrixX<Scalar>::Zero(params.n_sites, params.n_types + 1);
    for (Eigen::Index s = 0; s < dist.size(); ++s) {
        const LatticeState x = decode({static_cast<std::uint64_t>(s)}, params);
        for (int i = 1; i <= params.n_sites; ++i)
            out(i - 1, x.at(i)) += dist(s);
    }
    return out;
}

}  // namespace ssep

#endif  // SSEP_EXACT_HPP
