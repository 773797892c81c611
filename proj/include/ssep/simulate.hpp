#ifndef SSEP_SIMULATE_HPP
#define SSEP_SIMULATE_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ssep/model.hpp"

namespace ssep {

class InvalidConfigError : public Error {
public:
    using Error::Error;
};

class MixedModelError : public Error {
public:
    using Error::Error;
};

struct SimConfig {
    std::uint64_t seed = 1;
    std::uint64_t max_events = 1'000'000;
    double warmup_fraction = 0.2;  // leading share of events discarded
    int replicas = 1;
    bool record_trajectory = false;

    void validate() const;
    std::uint64_t warmup_events() const;

    friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

/// Largest state space for which per-state occupancy times are kept.
inline constexpr std::uint64_t kJointOccupancyLimit = 4096;

/// Random stream of one replica.
///
/// The engine is std::mt19937_64. Its seed is derived from (seed,
/// replica_index) by two rounds of splitmix64, so streams are reproducible
/// and distinct replicas get unrelated seeds. Uniforms use the top 53 bits
/// of each draw, exponentials are -log1p(-u)/rate.
class ReplicaRng {
public:
    ReplicaRng(std::uint64_t seed, std::uint64_t replica_index)
        : engine_(stream_seed(seed, replica_index)) {}

    static std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t replica_index);
    static std::string description();

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double exponential(double rate);

private:
    std::mt19937_64 engine_;
};

struct TaggedParticle {
    std::uint64_t id;
    int ptype;
    double arrival_time;
    std::optional<double> departure_time;

    friend bool operator==(const TaggedParticle&, const TaggedParticle&) = default;
};

struct TrajectoryPoint {
    double time;  // time at which the event fired
    Event event;
    LatticeState after;

    friend bool operator==(const TrajectoryPoint&, const TrajectoryPoint&) = default;
};

/// Measurements collected over the post-warm-up window.
struct SimStats {
    ModelParams params;
    std::vector<std::uint64_t> replica_ids;
    double total_time = 0.0;
    Eigen::MatrixXd site_occupancy_time;   // N x (K+1)
    Eigen::VectorXd state_occupancy_time;  // per StateIndex; empty above kJointOccupancyLimit
    std::vector<std::uint64_t> arrivals_by_type;
    std::vector<std::uint64_t> departures_by_type;
    std::vector<std::vector<double>> completed_sojourns;  // per type
    std::uint64_t event_count = 0;                        // events inside the window
    std::vector<std::int64_t> window_start_counts;        // particles per type at window start
    std::vector<std::int64_t> window_end_counts;          // particles per type at window end

    // Filled only when record_trajectory is set; dropped by merge_replicas.
    std::vector<TrajectoryPoint> trajectory;
    std::vector<TaggedParticle> particles;

    friend bool operator==(const SimStats& a, const SimStats& b);
};

struct NextEvent {
    double dt;
    Event event;
};

/// Direct-method step: one aggregated exponential clock, then a
/// rate-proportional pick among the enabled events.
NextEvent sample_next_event(const LatticeState& state, const ModelParams& params, ReplicaRng& rng);

/// Runs one replica from the all-vacant state for config.max_events events.
SimStats run_replica(const ModelParams& params, const SimConfig& config, std::uint64_t replica_index);

/// Replicas 0..config.replicas-1, run concurrently, returned in index order.
std::vector<SimStats> run_replicas(const ModelParams& params, const SimConfig& config);

/// Sums times and counts, concatenates sojourn lists. The inputs are put in
/// replica-id order first so the result does not depend on argument order.
SimStats merge_replicas(std::span<const SimStats> stats);

}  // namespace ssep

#endif  // SSEP_SIMULATE_HPP
