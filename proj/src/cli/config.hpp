#ifndef SSEP_CLI_CONFIG_HPP
#define SSEP_CLI_CONFIG_HPP

#include <string>

#include "ssep/model.hpp"
#include "ssep/simulate.hpp"

namespace ssep::cli {

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Tolerances of the verification battery.
struct Tolerances {
    double oracle = 1e-10;    // solved vs closed-form distribution
    double identity = 1e-12;  // flux, Little's law and marginal identities
    double balance = 1e-12;   // pairwise balance and reversed rates
    double cycle = 1e-10;     // Kolmogorov cycle residual
    double uniform = 1e-10;   // equiprobability when alpha == beta
    int max_cycle_len = 6;

    friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

struct RunConfig {
    ModelParams model;
    SimConfig sim;
    Tolerances tolerances;
    std::string format = "json";  // json | csv
    std::string output;           // empty: stdout

    void validate() const;
    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// N=5, K=2, alpha=(1,2), beta=(2,1), delta=(1,1), boundary hops on.
RunConfig default_config();

/// Flat YAML map. Keys: n_sites, n_types, alpha, beta, delta,
/// boundary_hops, seed, max_events, warmup_fraction, replicas,
/// record_trajectory, format, output and the *_tolerance / max_cycle_len
/// entries. Missing keys keep the values already in `base`.
RunConfig parse_config(const std::string& text, RunConfig base = default_config());
RunConfig load_config(const std::string& path, RunConfig base = default_config());
std::string emit_config(const RunConfig& config);

}  // namespace ssep::cli

#endif  // SSEP_CLI_CONFIG_HPP
