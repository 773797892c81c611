#ifndef SSEP_CLI_REPORT_HPP
#define SSEP_CLI_REPORT_HPP

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cli/config.hpp"
#include "ssep/analytics.hpp"
#include "ssep/exact.hpp"

namespace ssep::cli {

struct CheckResult {
    std::string name;
    enum class Status { Pass, Fail, Skipped } status = Status::Pass;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string note;
};

std::string to_string(CheckResult::Status status);

/// Test mode: scale the first hop rate (or the first rate of any kind when
/// the chain has no hops) by `factor`, breaking pairwise balance.
Generator perturb_generator(Generator gen, double factor);

/// The invariant battery on the configured model. `perturb_factor` != 1
/// runs it against a perturbed generator instead.
std::vector<CheckResult> run_checks(const RunConfig& config, double perturb_factor = 1.0);

/// Model parameters, seed, version, tolerances and rng description.
nlohmann::json provenance(const RunConfig& config);

struct ExactResult {
    Generator generator;
    SolveMethod method;
    Eigen::VectorXd closed_form;
    Eigen::VectorXd solved;
    double max_deviation = 0.0;
    double normalization_constant = 0.0;
    Eigen::MatrixXd marginals_closed_form;  // N x (K+1)
    Eigen::MatrixXd marginals_solved;
};

struct SimulationResult {
    std::vector<SimStats> replicas;
    SimStats merged;
    EmpiricalReport estimates;
};

ExactResult compute_exact(const RunConfig& config);
SimulationResult compute_simulation(const RunConfig& config);

nlohmann::json exact_report(const RunConfig& config, const ExactResult& result);
nlohmann::json simulate_report(const RunConfig& config, const SimulationResult& result);
nlohmann::json exact_report(const RunConfig& config);
nlohmann::json simulate_report(const RunConfig& config);
/// Second member is true iff every check passed or was skipped.
std::pair<nlohmann::json, bool> verify_report(const RunConfig& config, double perturb_factor = 1.0);
nlohmann::json full_report(const RunConfig& config);

/// A CSV table; written as <stem>_<name>.csv or as a "# name" block on stdout.
struct CsvTable {
    std::string name;
    std::string text;
};

std::string format_number(double x);  // %.17g

/// state_index,state_string,p_closed_form,p_solved
CsvTable distribution_csv(const ModelParams& params, const Eigen::VectorXd& closed,
                          const Eigen::VectorXd& solved);
/// site,state,probability
CsvTable marginals_csv(const Eigen::MatrixXd& marginals, const std::string& name = "marginals");
/// type,j_closed,j_boundary,j_empirical,stderr,zscore
CsvTable flux_csv(const FluxReport& flux);
/// type,u_closed,u_littles_law,u_empirical,stderr,samples,zscore
CsvTable sojourn_csv(const SojournReport& sojourn);
/// name,status,measured,tolerance,note
CsvTable checks_csv(const std::vector<CheckResult>& checks);

std::vector<CsvTable> exact_tables(const ExactResult& result, const ModelParams& params);
std::vector<CsvTable> simulate_tables(const SimulationResult& result);

}  // namespace ssep::cli

#endif  // SSEP_CLI_REPORT_HPP
