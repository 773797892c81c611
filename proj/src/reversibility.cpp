#include "ssep/reversibility.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace ssep {

namespace {

int occupied(const LatticeState& x)
{
    int n = 0;
    for (int v : x.sites)
        n += (v != 0);
    return n;
}

using RowMajor = Eigen::SparseMatrix<double, Eigen::RowMajor>;

}  // namespace

TransitionClass classify_transition(const ModelParams& params, Eigen::Index from, Eigen::Index to)
{
    const int a = occupied(decode({static_cast<std::uint64_t>(from)}, params));
    const int b = occupied(decode({static_cast<std::uint64_t>(to)}, params));
    if (b > a)
        return TransitionClass::Arrival;
    if (b < a)
        return TransitionClass::Departure;
    return TransitionClass::Hop;
}

BalanceReport detailed_balance_residual(const Generator& gen, const Distribution& dist)
{
    if (dist.size() != gen.dimension())
        throw InvalidStateError("distribution has " + std::to_string(dist.size()) +
                                " entries, generator has " + std::to_string(gen.dimension()));
    BalanceReport report;
    for (Eigen::Index i = 0; i < gen.rates.outerSize(); ++i) {
        for (RowMajor::InnerIterator it(gen.rates, i); it; ++it) {
            const Eigen::Index j = it.col();
            const double r = std::abs(dist(i) * it.value() - dist(j) * gen.rate(j, i));
            const auto cls = static_cast<std::size_t>(classify_transition(gen.params, i, j));
            report.class_max[cls] = std::max(report.class_max[cls], r);
            if (r > report.max_abs_residual || report.worst_pair.first < 0) {
                report.max_abs_residual = std::max(report.max_abs_residual, r);
                report.worst_pair = {i, j};
            }
        }
    }
    return report;
}

ReversedGenerator reversed_generator(const Generator& gen, const Distribution& dist,
                                     double stationarity_tolerance)
{
    if (dist.size() != gen.dimension())
        throw InvalidStateError("distribution has " + std::to_string(dist.size()) +
                                " entries, generator has " + std::to_string(gen.dimension()));
    for (Eigen::Index i = 0; i < dist.size(); ++i)
        if (!(dist(i) > 0.0))
            throw ZeroProbabilityError("state " + std::to_string(i) +
                                       " has zero probability; the reversed chain is undefined");
    const double residual = balance_residual(gen, dist).lpNorm<Eigen::Infinity>();
    if (residual > stationarity_tolerance)
        throw NonStationaryError("distribution is not stationary for the generator (balance residual " +
                                 std::to_string(residual) + ")");

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(gen.rates.nonZeros()));
    for (Eigen::Index j = 0; j < gen.rates.outerSize(); ++j)
        for (RowMajor::InnerIterator it(gen.rates, j); it; ++it) {
            const Eigen::Index i = it.col();  // forward j -> i, reversed i -> j
            triplets.emplace_back(i, j, dist(j) * it.value() / dist(i));
        }
    ReversedGenerator rev{gen.params, RowMajor(gen.dimension(), gen.dimension())};
    rev.rates.setFromTriplets(triplets.begin(), triplets.end());
    rev.rates.makeCompressed();
    return rev;
}

double max_rate_difference(const Generator& a, const Generator& b)
{
    if (a.dimension() != b.dimension())
        throw InvalidStateError("generators differ in dimension");
    const RowMajor diff = a.rates - b.rates;
    double out = 0.0;
    for (Eigen::Index k = 0; k < diff.nonZeros(); ++k)
        out = std::max(out, std::abs(diff.valuePtr()[k]));
    return out;
}

namespace {

class CycleSearch {
public:
    CycleSearch(const Generator& gen, int max_len, std::uint64_t budget, CycleReport& report)
        : gen_(gen), max_len_(max_len), budget_(budget), report_(report),
          on_path_(static_cast<std::size_t>(gen.dimension()), false)
    {
    }

    /// All simple cycles through `start`; with `lowest_first` only those whose
    /// smallest vertex is `start`, so each cycle is seen once overall.
    void run(Eigen::Index start, bool lowest_first)
    {
        start_ = start;
        lowest_first_ = lowest_first;
        found_ = 0;
        path_.assign(1, start);
        on_path_[static_cast<std::size_t>(start)] = true;
        extend(start, 1.0);
        on_path_[static_cast<std::size_t>(start)] = false;
    }

private:
    void extend(Eigen::Index v, double forward)
    {
        for (RowMajor::InnerIterator it(gen_.rates, v); it; ++it) {
            if (found_ >= budget_)
                return;
            const Eigen::Index w = it.col();
            const double f = forward * it.value();
            if (w == start_) {
                if (path_.size() >= 2)
                    close(f);
                continue;
            }
            if (on_path_[static_cast<std::size_t>(w)] || (lowest_first_ && w < start_) ||
                static_cast<int>(path_.size()) >= max_len_)
                continue;
            on_path_[static_cast<std::size_t>(w)] = true;
            path_.push_back(w);
            extend(w, f);
            path_.pop_back();
            on_path_[static_cast<std::size_t>(w)] = false;
        }
    }

    void close(double forward)
    {
        double reverse = 1.0;
        const std::size_t len = path_.size();
        for (std::size_t s = 0; s < len; ++s)
            reverse *= gen_.rate(path_[(s + 1) % len], path_[s]);
        const double r = std::abs(forward - reverse) / forward;
        ++found_;
        ++report_.cycles;
        if (r > report_.max_residual || report_.worst_cycle.empty()) {
            report_.max_residual = std::max(report_.max_residual, r);
            report_.worst_cycle = path_;
        }
    }

    const Generator& gen_;
    int max_len_;
    std::uint64_t budget_;
    CycleReport& report_;
    std::vector<bool> on_path_;
    std::vector<Eigen::Index> path_;
    Eigen::Index start_ = 0;
    bool lowest_first_ = true;
    std::uint64_t found_ = 0;
};

}  // namespace

CycleReport kolmogorov_cycle_residual(const Generator& gen, int max_cycle_len,
                                      const CycleOptions& options)
{
    if (max_cycle_len < 3)
        throw Error("max_cycle_len must be at least 3");
    CycleReport report;
    const Eigen::Index m = gen.dimension();
    if (m <= options.exhaustive_limit) {
        CycleSearch search(gen, max_cycle_len, std::numeric_limits<std::uint64_t>::max(), report);
        for (Eigen::Index s = 0; s < m; ++s)
            search.run(s, true);
        return report;
    }
    report.exhaustive = false;
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<Eigen::Index> pick(0, m - 1);
    CycleSearch search(gen, max_cycle_len, options.max_cycles_per_start, report);
    for (int s = 0; s < options.sampled_starts; ++s)
        search.run(pick(rng), false);
    return report;
}

bool arrival_equals_departure(const ModelParams& params)
{
    return params.alpha == params.beta;
}

double uniformity_check(const ModelParams& params, const SolveOptions& options)
{
    params.validate();
    if (!arrival_equals_departure(params))
        throw ConditionViolatedError("uniformity requires alpha_k == beta_k for every type");
    const Distribution p = solve_stationary(build_generator(params), options);
    const double target = std::pow(static_cast<double>(params.n_types + 1), -params.n_sites);
    return (p.array() - target).abs().maxCoeff();
}

}  // namespace ssep
