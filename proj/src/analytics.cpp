#include "ssep/analytics.hpp"

#include <cmath>

namespace ssep {

FluxReport flux_report(const ModelParams& params)
{
    FluxReport r;
    for (int k = 1; k <= params.n_types; ++k) {
        FluxEntry e;
        e.closed_form = arrival_rate_closed_form(params, k);
        e.boundary_form = arrival_rate_boundary_form(params, k);
        r.per_type.push_back(e);
    }
    return r;
}

SojournReport sojourn_report(const ModelParams& params)
{
    SojournReport r;
    for (int k = 1; k <= params.n_types; ++k) {
        SojournEntry e;
        e.closed_form = sojourn_closed_form(params, k);
        e.littles_law = sojourn_littles_law(params, k);
        r.per_type.push_back(e);
    }
    return r;
}

EmpiricalReport estimate_from_stats(const SimStats& stats, const ModelParams& params)
{
    if (!(stats.params == params))
        throw MixedModelError("statistics were collected for a different model");
    if (!(stats.total_time > 0.0))
        throw EmptyMeasurementError("no measured time: total_time must be positive");

    EmpiricalReport out;
    out.flux = flux_report(params);
    out.sojourn = sojourn_report(params);
    const double t = stats.total_time;

    for (int k = 1; k <= params.n_types; ++k) {
        FluxEntry& f = out.flux.per_type[k - 1];
        const auto arrivals = static_cast<double>(stats.arrivals_by_type[k - 1]);
        f.empirical = arrivals / t;
        f.standard_error = std::sqrt(arrivals) / t;
        f.zscore = f.standard_error > 0.0 ? (f.empirical - f.closed_form) / f.standard_error : 0.0;

        SojournEntry& s = out.sojourn.per_type[k - 1];
        const std::vector<double>& xs = stats.completed_sojourns[k - 1];
        s.samples = xs.size();
        s.sufficient = xs.size() >= 2;
        if (!s.sufficient)
            continue;
        double mean = 0.0;
        for (double x : xs)
            mean += x;
        mean /= static_cast<double>(xs.size());
        double ss = 0.0;
        for (double x : xs)
            ss += (x - mean) * (x - mean);
        const double var = ss / static_cast<double>(xs.size() - 1);
        s.empirical = mean;
        s.standard_error = std::sqrt(var / static_cast<double>(xs.size()));
        s.zscore = s.standard_error > 0.0 ? (s.empirical - s.closed_form) / s.standard_error : 0.0;
    }
    out.marginals = stats.site_occupancy_time / t;
    return out;
}

EmpiricalReport estimate_from_replicas(std::span<const SimStats> replicas, const ModelParams& params)
{
    const SimStats merged = merge_replicas(replicas);
    EmpiricalReport out = estimate_from_stats(merged, params);
    const auto r = static_cast<Eigen::Index>(replicas.size());
    if (r < 2)
        return out;

    const Eigen::Index n = params.n_sites;
    const Eigen::Index m = params.n_types + 1;
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(n, m);
    Eigen::MatrixXd sq = Eigen::MatrixXd::Zero(n, m);
    for (const SimStats& s : replicas) {
        if (!(s.total_time > 0.0))
            throw EmptyMeasurementError("replica with no measured time");
        const Eigen::MatrixXd frac = s.site_occupancy_time / s.total_time;
        mean += frac;
        sq += frac.cwiseProduct(frac);
    }
    mean /= static_cast<double>(r);
    const Eigen::MatrixXd var =
        ((sq - static_cast<double>(r) * mean.cwiseProduct(mean)) / static_cast<double>(r - 1))
            .cwiseMax(0.0);
    out.marginal_stderr = (var / static_cast<double>(r)).cwiseSqrt();

    out.marginal_zscore.resize(n, m);
    for (Eigen::Index i = 0; i < n; ++i) {
        const SiteMarginal<> target = site_marginal(params, static_cast<int>(i + 1));
        for (Eigen::Index j = 0; j < m; ++j) {
            const double se = out.marginal_stderr(i, j);
            out.marginal_zscore(i, j) = se > 0.0 ? (out.marginals(i, j) - target(j)) / se : 0.0;
        }
    }
    return out;
}

}  // namespace ssep
