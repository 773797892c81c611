#include "cli/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "ssep/reversibility.hpp"

namespace ssep::cli {

using nlohmann::json;

namespace {

json to_json(const Eigen::VectorXd& v)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(v(i));
    return out;
}

json to_json(const Eigen::MatrixXd& m)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        out.push_back(to_json(Eigen::VectorXd(m.row(i).transpose())));
    return out;
}

Eigen::MatrixXd closed_form_marginals(const ModelParams& params)
{
    Eigen::MatrixXd out(params.n_sites, params.n_types + 1);
    for (int i = 1; i <= params.n_sites; ++i)
        out.row(i - 1) = site_marginal(params, i).transpose();
    return out;
}

}  // namespace

std::string to_string(CheckResult::Status status)
{
    switch (status) {
    case CheckResult::Status::Pass: return "pass";
    case CheckResult::Status::Fail: return "fail";
    case CheckResult::Status::Skipped: return "skipped";
    }
    return "?";
}

json provenance(const RunConfig& config)
{
    const ModelParams& m = config.model;
    return json{
        {"artifact", "ssep"},
        {"version", SSEP_VERSION},
        {"model",
         {{"n_sites", m.n_sites},
          {"n_types", m.n_types},
          {"alpha", to_json(m.alpha)},
          {"beta", to_json(m.beta)},
          {"delta", to_json(m.delta)},
          {"boundary_hops", m.boundary_hops}}},
        {"seed", config.sim.seed},
        {"rng", ReplicaRng::description()},
        {"tolerances",
         {{"oracle", config.tolerances.oracle},
          {"identity", config.tolerances.identity},
          {"balance", config.tolerances.balance},
          {"cycle", config.tolerances.cycle},
          {"uniform", config.tolerances.uniform},
          {"max_cycle_len", config.tolerances.max_cycle_len}}},
    };
}

ExactResult compute_exact(const RunConfig& config)
{
    const ModelParams& p = config.model;
    ExactResult r{build_generator(p), SolveMethod::DenseLU, {}, {}, 0.0, 0.0, {}, {}};
    r.method = solve_method(r.generator);
    r.closed_form = product_form(p);
    r.solved = solve_stationary(r.generator);
    r.max_deviation = (r.solved - r.closed_form).lpNorm<Eigen::Infinity>();
    r.normalization_constant = normalization_constant(p);
    r.marginals_closed_form = closed_form_marginals(p);
    r.marginals_solved = marginals_of(r.solved, p);
    return r;
}

json exact_report(const RunConfig& config, const ExactResult& r)
{
    const ModelParams& p = config.model;
    json dist = json::array();
    for (Eigen::Index s = 0; s < r.solved.size(); ++s)
        dist.push_back({{"state_index", s},
                        {"state", to_string(decode({static_cast<std::uint64_t>(s)}, p))},
                        {"p_closed_form", r.closed_form(s)},
                        {"p_solved", r.solved(s)}});
    return json{
        {"command", "exact"},
        {"provenance", provenance(config)},
        {"state_space_size", r.solved.size()},
        {"solver", to_string(r.method)},
        {"normalization_constant", r.normalization_constant},
        {"max_deviation", r.max_deviation},
        {"site_marginals_closed_form", to_json(r.marginals_closed_form)},
        {"site_marginals_solved", to_json(r.marginals_solved)},
        {"distribution", dist},
    };
}

json exact_report(const RunConfig& config)
{
    return exact_report(config, compute_exact(config));
}

SimulationResult compute_simulation(const RunConfig& config)
{
    SimulationResult r;
    r.replicas = run_replicas(config.model, config.sim);
    r.merged = merge_replicas(r.replicas);
    r.estimates = estimate_from_replicas(r.replicas, config.model);
    return r;
}

json simulate_report(const RunConfig& config, const SimulationResult& r)
{
    const ModelParams& p = config.model;
    json streams = json::array();
    for (const SimStats& s : r.replicas)
        streams.push_back({{"replica", s.replica_ids.front()},
                           {"stream_seed", ReplicaRng::stream_seed(config.sim.seed, s.replica_ids.front())},
                           {"events_measured", s.event_count},
                           {"measured_time", s.total_time}});

    json flux = json::array();
    for (int k = 1; k <= p.n_types; ++k) {
        const FluxEntry& f = r.estimates.flux.per_type[k - 1];
        flux.push_back({{"type", k},
                        {"j_closed", f.closed_form},
                        {"j_boundary", f.boundary_form},
                        {"j_empirical", f.empirical},
                        {"stderr", f.standard_error},
                        {"zscore", f.zscore},
                        {"arrivals", r.merged.arrivals_by_type[k - 1]},
                        {"departures", r.merged.departures_by_type[k - 1]}});
    }
    json sojourn = json::array();
    for (int k = 1; k <= p.n_types; ++k) {
        const SojournEntry& s = r.estimates.sojourn.per_type[k - 1];
        json e{{"type", k},
               {"u_closed", s.closed_form},
               {"u_littles_law", s.littles_law},
               {"samples", s.samples}};
        if (s.sufficient) {
            e["u_empirical"] = s.empirical;
            e["stderr"] = s.standard_error;
            e["zscore"] = s.zscore;
        } else {
            e["status"] = "insufficient data";
        }
        sojourn.push_back(e);
    }
    json marginals{{"closed_form", to_json(closed_form_marginals(p))},
                   {"empirical", to_json(r.estimates.marginals)}};
    if (r.estimates.marginal_stderr.size() > 0) {
        marginals["stderr"] = to_json(r.estimates.marginal_stderr);
        marginals["zscore"] = to_json(r.estimates.marginal_zscore);
    }
    return json{
        {"command", "simulate"},
        {"provenance", provenance(config)},
        {"simulation",
         {{"max_events", config.sim.max_events},
          {"warmup_fraction", config.sim.warmup_fraction},
          {"warmup_events", config.sim.warmup_events()},
          {"replicas", config.sim.replicas},
          {"events_measured", r.merged.event_count},
          {"measured_time", r.merged.total_time},
          {"streams", streams}}},
        {"flux", flux},
        {"sojourn", sojourn},
        {"site_marginals", marginals},
    };
}

json simulate_report(const RunConfig& config)
{
    return simulate_report(config, compute_simulation(config));
}

Generator perturb_generator(Generator gen, double factor)
{
    using RowMajor = Eigen::SparseMatrix<double, Eigen::RowMajor>;
    for (Eigen::Index i = 0; i < gen.rates.outerSize(); ++i)
        for (RowMajor::InnerIterator it(gen.rates, i); it; ++it)
            if (classify_transition(gen.params, i, it.col()) == TransitionClass::Hop) {
                it.valueRef() *= factor;
                return gen;
            }
    if (gen.rates.nonZeros() > 0)
        gen.rates.valuePtr()[0] *= factor;
    return gen;
}

namespace {

using Status = CheckResult::Status;

CheckResult bounded(std::string name, double measured, double tol, std::string note = {})
{
    return {std::move(name), measured <= tol ? Status::Pass : Status::Fail, measured, tol,
            std::move(note)};
}

CheckResult failed(std::string name, double tol, const std::exception& e)
{
    return {std::move(name), Status::Fail, std::nan(""), tol, e.what()};
}

template <typename F>
void attempt(std::vector<CheckResult>& out, const std::string& name, double tol, F&& f)
{
    try {
        out.push_back(f());
    } catch (const std::exception& e) {
        out.push_back(failed(name, tol, e));
    }
}

}  // namespace

std::vector<CheckResult> run_checks(const RunConfig& config, double perturb_factor)
{
    config.validate();
    const ModelParams& p = config.model;
    const Tolerances& tol = config.tolerances;
    std::vector<CheckResult> out;

    Generator gen = build_generator(p);
    if (perturb_factor != 1.0)
        gen = perturb_generator(std::move(gen), perturb_factor);
    const Eigen::VectorXd closed = product_form(p);
    const bool alpha_eq_beta = arrival_equals_departure(p);

    out.push_back(bounded("generator_row_sums", gen.row_sums().lpNorm<Eigen::Infinity>(), 1e-12));
    out.push_back({"irreducible", is_irreducible(gen) ? Status::Pass : Status::Fail,
                   is_irreducible(gen) ? 1.0 : 0.0, 1.0, "transition graph strongly connected"});

    attempt(out, "oracle_equivalence", tol.oracle, [&] {
        const Eigen::VectorXd solved = solve_stationary(gen);
        return bounded("oracle_equivalence", (solved - closed).lpNorm<Eigen::Infinity>(), tol.oracle,
                       "max |solved - product form|, " + to_string(solve_method(gen)));
    });
    attempt(out, "marginals_solved", tol.oracle, [&] {
        const Eigen::VectorXd solved = solve_stationary(gen);
        const double d = (marginals_of(solved, p) - closed_form_marginals(p)).lpNorm<Eigen::Infinity>();
        return bounded("marginals_solved", d, tol.oracle, "summed solved distribution vs closed form");
    });
    out.push_back(bounded(
        "marginals_product_form",
        (marginals_of(closed, p) - closed_form_marginals(p)).lpNorm<Eigen::Infinity>(), tol.identity,
        "summed product form vs closed form"));
    out.push_back(bounded("joint_from_marginals",
                          (joint_from_marginals(p) - closed).lpNorm<Eigen::Infinity>(), tol.identity));

    const BalanceReport balance = detailed_balance_residual(gen, closed);
    {
        std::ostringstream note;
        note << "per class max: arrival " << balance.class_max[0] << ", departure "
             << balance.class_max[1] << ", hop " << balance.class_max[2];
        out.push_back(bounded("detailed_balance", balance.max_abs_residual, tol.balance, note.str()));
    }
    attempt(out, "kolmogorov_cycles", tol.cycle, [&] {
        const CycleReport c = kolmogorov_cycle_residual(gen, tol.max_cycle_len);
        return bounded("kolmogorov_cycles", c.max_residual, tol.cycle,
                       std::to_string(c.cycles) + " cycles" + (c.exhaustive ? "" : " (sampled)"));
    });
    attempt(out, "reversed_rates_general", tol.balance, [&] {
        const double d = max_rate_difference(reversed_generator(gen, closed), gen);
        return bounded("reversed_rates_general", d, tol.balance, "product form as stationary input");
    });
    if (alpha_eq_beta) {
        attempt(out, "reversed_rates_alpha_eq_beta", tol.balance, [&] {
            const double d = max_rate_difference(reversed_generator(gen, closed), gen);
            return bounded("reversed_rates_alpha_eq_beta", d, tol.balance,
                           "alpha == beta condition satisfied");
        });
        attempt(out, "uniformity", tol.uniform, [&] {
            const Eigen::VectorXd solved = solve_stationary(gen);
            const double target = std::pow(double(p.n_types + 1), -p.n_sites);
            return bounded("uniformity", (solved.array() - target).abs().maxCoeff(), tol.uniform,
                           "alpha == beta condition satisfied");
        });
    } else {
        out.push_back({"reversed_rates_alpha_eq_beta", Status::Skipped, std::nan(""), tol.balance,
                       "alpha != beta; general-rate check above applies"});
        out.push_back({"uniformity", Status::Skipped, std::nan(""), tol.uniform, "alpha != beta"});
    }

    double flux = 0.0, little = 0.0;
    for (int k = 1; k <= p.n_types; ++k) {
        flux = std::max(flux, std::abs(arrival_rate_closed_form(p, k) - arrival_rate_boundary_form(p, k)));
        little = std::max(little, std::abs(sojourn_littles_law(p, k) - sojourn_closed_form(p, k)));
    }
    out.push_back(bounded("flux_identity", flux, tol.identity));
    out.push_back(bounded("littles_law_identity", little, tol.identity));

    attempt(out, "delta_independence", tol.oracle, [&] {
        const Eigen::VectorXd base = solve_stationary(gen);
        std::vector<Eigen::VectorXd> variants{p.delta * 0.25, p.delta * 4.0,
                                              p.delta + Eigen::VectorXd::LinSpaced(p.n_types, 0.5, 1.5)};
        std::string note = "delta scaled by 0.25 and 4, shifted per type";
        if (p.n_sites == 2) {
            variants.push_back(Eigen::VectorXd::Zero(p.n_types));
            note += ", and delta = 0";
        } else {
            note += "; delta = 0 omitted (interior sites unreachable for N >= 3)";
        }
        double worst = 0.0;
        for (const Eigen::VectorXd& d : variants) {
            ModelParams q = p;
            q.delta = d;
            worst = std::max(worst, (solve_stationary(build_generator(q)) - base).lpNorm<Eigen::Infinity>());
        }
        return bounded("delta_independence", worst, tol.oracle, note);
    });
    return out;
}

std::pair<json, bool> verify_report(const RunConfig& config, double perturb_factor)
{
    const std::vector<CheckResult> checks = run_checks(config, perturb_factor);
    bool ok = true;
    json list = json::array();
    for (const CheckResult& c : checks) {
        ok = ok && c.status != Status::Fail;
        list.push_back({{"name", c.name},
                        {"status", to_string(c.status)},
                        {"measured", c.measured},
                        {"tolerance", c.tolerance},
                        {"note", c.note}});
    }
    json doc{{"command", "verify"},
             {"provenance", provenance(config)},
             {"checks", list},
             {"all_passed", ok}};
    if (perturb_factor != 1.0)
        doc["perturbed_generator_factor"] = perturb_factor;
    return {doc, ok};
}

json full_report(const RunConfig& config)
{
    const ExactResult exact = compute_exact(config);
    const SimulationResult sim = compute_simulation(config);
    json ex = exact_report(config, exact);
    json si = simulate_report(config, sim);
    ex.erase("provenance");
    si.erase("provenance");

    const ModelParams& p = config.model;
    json marginals = json::array();
    for (int i = 1; i <= p.n_sites; ++i)
        for (int s = 0; s <= p.n_types; ++s) {
            json e{{"site", i},
                   {"state", s},
                   {"exact", exact.marginals_solved(i - 1, s)},
                   {"closed_form", exact.marginals_closed_form(i - 1, s)},
                   {"empirical", sim.estimates.marginals(i - 1, s)}};
            if (sim.estimates.marginal_zscore.size() > 0)
                e["zscore"] = sim.estimates.marginal_zscore(i - 1, s);
            marginals.push_back(e);
        }
    json flux = json::array(), sojourn = json::array();
    for (int k = 1; k <= p.n_types; ++k) {
        const FluxEntry& f = sim.estimates.flux.per_type[k - 1];
        flux.push_back({{"type", k}, {"closed_form", f.closed_form}, {"empirical", f.empirical},
                        {"zscore", f.zscore}});
        const SojournEntry& s = sim.estimates.sojourn.per_type[k - 1];
        json e{{"type", k}, {"closed_form", s.closed_form}};
        if (s.sufficient) {
            e["empirical"] = s.empirical;
            e["zscore"] = s.zscore;
        } else {
            e["status"] = "insufficient data";
        }
        sojourn.push_back(e);
    }
    return json{{"command", "report"},
                {"provenance", provenance(config)},
                {"exact", ex},
                {"simulate", si},
                {"comparison", {{"site_marginals", marginals}, {"flux", flux}, {"sojourn", sojourn}}}};
}

std::string format_number(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

CsvTable distribution_csv(const ModelParams& params, const Eigen::VectorXd& closed,
                          const Eigen::VectorXd& solved)
{
    std::ostringstream os;
    os << "state_index,state_string,p_closed_form,p_solved\n";
    for (Eigen::Index s = 0; s < closed.size(); ++s) {
        std::string state;
        for (int x : decode({static_cast<std::uint64_t>(s)}, params).sites)
            state += (state.empty() ? "" : "-") + std::to_string(x);
        os << s << ',' << state << ',' << format_number(closed(s)) << ','
           << format_number(solved(s)) << '\n';
    }
    return {"distribution", os.str()};
}

CsvTable marginals_csv(const Eigen::MatrixXd& marginals, const std::string& name)
{
    std::ostringstream os;
    os << "site,state,probability\n";
    for (Eigen::Index i = 0; i < marginals.rows(); ++i)
        for (Eigen::Index s = 0; s < marginals.cols(); ++s)
            os << i + 1 << ',' << s << ',' << format_number(marginals(i, s)) << '\n';
    return {name, os.str()};
}

CsvTable flux_csv(const FluxReport& flux)
{
    std::ostringstream os;
    os << "type,j_closed,j_boundary,j_empirical,stderr,zscore\n";
    for (std::size_t k = 0; k < flux.per_type.size(); ++k) {
        const FluxEntry& f = flux.per_type[k];
        os << k + 1 << ',' << format_number(f.closed_form) << ',' << format_number(f.boundary_form)
           << ',' << format_number(f.empirical) << ',' << format_number(f.standard_error) << ','
           << format_number(f.zscore) << '\n';
    }
    return {"flux", os.str()};
}

CsvTable sojourn_csv(const SojournReport& sojourn)
{
    std::ostringstream os;
    os << "type,u_closed,u_littles_law,u_empirical,stderr,samples,zscore\n";
    for (std::size_t k = 0; k < sojourn.per_type.size(); ++k) {
        const SojournEntry& s = sojourn.per_type[k];
        os << k + 1 << ',' << format_number(s.closed_form) << ',' << format_number(s.littles_law) << ',';
        if (s.sufficient)
            os << format_number(s.empirical) << ',' << format_number(s.standard_error) << ','
               << s.samples << ',' << format_number(s.zscore) << '\n';
        else
            os << ",," << s.samples << ",\n";
    }
    return {"sojourn", os.str()};
}

CsvTable checks_csv(const std::vector<CheckResult>& checks)
{
    std::ostringstream os;
    os << "name,status,measured,tolerance,note\n";
    for (const CheckResult& c : checks) {
        std::string note = c.note;
        for (char& ch : note)
            if (ch == '"')
                ch = '\'';
        os << c.name << ',' << to_string(c.status) << ',' << format_number(c.measured) << ','
           << format_number(c.tolerance) << ",\"" << note << "\"\n";
    }
    return {"checks", os.str()};
}

std::vector<CsvTable> exact_tables(const ExactResult& result, const ModelParams& params)
{
    return {distribution_csv(params, result.closed_form, result.solved),
            marginals_csv(result.marginals_solved, "marginals")};
}

std::vector<CsvTable> simulate_tables(const SimulationResult& result)
{
    return {marginals_csv(result.estimates.marginals, "marginals"), flux_csv(result.estimates.flux),
            sojourn_csv(result.estimates.sojourn)};
}

}  // namespace ssep::cli
