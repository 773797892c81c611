#ifndef SSEP_ANALYTICS_HPP
#define SSEP_ANALYTICS_HPP

#include <span>
#include <vector>

#include <Eigen/Core>

#include "ssep/exact.hpp"
#include "ssep/simulate.hpp"

namespace ssep {

class EmptyMeasurementError : public Error {
public:
    using Error::Error;
};

namespace detail {
inline void check_type(const ModelParams& params, int k)
{
    params.validate();
    if (k < 1 || k > params.n_types)
        throw InvalidStateError("type " + std::to_string(k) + " outside [1, " +
                                std::to_string(params.n_types) + "]");
}
}  // namespace detail

/// Stationary type-k arrivals per unit time, both boundaries together:
/// 2 alpha_k / (1 + sum_l alpha_l/beta_l).
template <typename Scalar = double>
Scalar arrival_rate_closed_form(const ModelParams& params, int k)
{
    detail::check_type(params, k);
    return Scalar(2) * Scalar(params.arrival(k)) / (Scalar(1) + rate_ratio_sum<Scalar>(params));
}

/// alpha_k times the vacancy probability of the two boundary sites.
template <typename Scalar = double>
Scalar arrival_rate_boundary_form(const ModelParams& params, int k)
{
    detail::check_type(params, k);
    const Scalar left = site_marginal<Scalar>(params, 1)(0);
    const Scalar right = site_marginal<Scalar>(params, params.n_sites)(0);
    return Scalar(params.arrival(k)) * (left + right);
}

/// Mean time a type-k particle spends in the lattice, N / (2 beta_k).
template <typename Scalar = double>
Scalar sojourn_closed_form(const ModelParams& params, int k)
{
    detail::check_type(params, k);
    return Scalar(params.n_sites) / (Scalar(2) * Scalar(params.departure(k)));
}

/// Little's law: mean type-k population over the type-k arrival rate.
template <typename Scalar = double>
Scalar sojourn_littles_law(const ModelParams& params, int k)
{
    detail::check_type(params, k);
    Scalar population(0);
    for (int i = 1; i <= params.n_sites; ++i)
        population += site_marginal<Scalar>(params, i)(k);
    return population / arrival_rate_closed_form<Scalar>(params, k);
}

struct FluxEntry {
    double closed_form = 0.0;
    double boundary_form = 0.0;
    double empirical = 0.0;
    double standard_error = 0.0;  // Poisson: sqrt(count) / time
    double zscore = 0.0;
};

struct FluxReport {
    std::vector<FluxEntry> per_type;  // index k-1
};

struct SojournEntry {
    double closed_form = 0.0;
    double littles_law = 0.0;
    double empirical = 0.0;  // mean of completed sojourns
    double standard_error = 0.0;
    std::size_t samples = 0;
    double zscore = 0.0;
    bool sufficient = false;  // false: fewer than two completed sojourns
};

struct SojournReport {
    std::vector<SojournEntry> per_type;
};

/// Per-type flux and sojourn entries without empirical data.
FluxReport flux_report(const ModelParams& params);
SojournReport sojourn_report(const ModelParams& params);

struct EmpiricalReport {
    FluxReport flux;
    SojournReport sojourn;
    Eigen::MatrixXd marginals;         // N x (K+1) time fractions
    Eigen::MatrixXd marginal_stderr;   // between-replica; empty for a single stats input
    Eigen::MatrixXd marginal_zscore;   // against the closed form; empty with marginal_stderr
};

/// Point estimates and standard errors from one (possibly merged) run.
EmpiricalReport estimate_from_stats(const SimStats& stats, const ModelParams& params);

/// As estimate_from_stats on the merged replicas, plus marginal standard
/// errors from the spread of the per-replica marginals.
EmpiricalReport estimate_from_replicas(std::span<const SimStats> replicas, const ModelParams& params);

}  // namespace ssep

#endif  // SSEP_ANALYTICS_HPP
