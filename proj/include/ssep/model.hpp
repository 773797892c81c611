#ifndef SSEP_MODEL_HPP
#define SSEP_MODEL_HPP

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace ssep {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidModelError : public Error {
public:
    using Error::Error;
};

class InvalidStateError : public Error {
public:
    using Error::Error;
};

class EventNotEnabledError : public Error {
public:
    using Error::Error;
};

/// The state space does not fit under the requested cap.
class StateSpaceOverflowError : public Error {
public:
    StateSpaceOverflowError(const std::string& what, std::uint64_t limit)
        : Error(what), limit_(limit) {}
    std::uint64_t limit() const noexcept { return limit_; }

private:
    std::uint64_t limit_;
};

/// Parameters of the open-boundary multi-type symmetric exclusion process.
///
/// Types are numbered 1..K and sites 1..N everywhere in the public API;
/// the rate vectors are stored 0-based (entry k-1 belongs to type k).
struct ModelParams {
    int n_sites = 2;
    int n_types = 1;
    Eigen::VectorXd alpha;  // arrival rate per type, at each boundary
    Eigen::VectorXd beta;   // departure rate per type, at each boundary
    Eigen::VectorXd delta;  // hop rate per type, per direction
    bool boundary_hops = true;

    /// Throws InvalidModelError when any invariant is broken.
    void validate() const;

    double arrival(int type) const { return alpha(type - 1); }
    double departure(int type) const { return beta(type - 1); }
    double hop(int type) const { return delta(type - 1); }

    friend bool operator==(const ModelParams& a, const ModelParams& b);
};

/// Convenience constructor from plain lists.
ModelParams make_params(int n_sites, const std::vector<double>& alpha,
                        const std::vector<double>& beta,
                        const std::vector<double>& delta,
                        bool boundary_hops = true);

/// Site contents, 1-based: at(i) is 0 for a vacancy, k for a type-k particle.
struct LatticeState {
    std::vector<int> sites;

    LatticeState() = default;
    explicit LatticeState(std::vector<int> s) : sites(std::move(s)) {}
    static LatticeState vacant(int n_sites) { return LatticeState(std::vector<int>(n_sites, 0)); }

    int size() const { return static_cast<int>(sites.size()); }
    int at(int site) const { return sites[site - 1]; }
    int& at(int site) { return sites[site - 1]; }
    int count(int type) const;

    friend bool operator==(const LatticeState&, const LatticeState&) = default;
};

std::string to_string(const LatticeState& state);

/// Throws InvalidStateError on a length mismatch or an out-of-range entry.
void check_state(const LatticeState& state, const ModelParams& params);

enum class EventKind { Arrival, Departure, HopLeft, HopRight };

/// Transition classes of the generator: arrivals, departures and hops.
enum class TransitionClass { Arrival = 0, Departure = 1, Hop = 2 };

struct Event {
    EventKind kind;
    int site;   // 1..N; for hops, the site the particle leaves
    int ptype;  // 1..K

    TransitionClass transition_class() const;
    /// Site that changes besides `site` (hops only), else `site`.
    int target() const;

    friend bool operator==(const Event&, const Event&) = default;
};

std::string to_string(EventKind kind);
std::string to_string(const Event& event);

/// The event undoing `event`; arrivals pair with departures, hops with hops.
Event inverse(const Event& event);

struct RatedEvent {
    Event event;
    double rate;

    friend bool operator==(const RatedEvent&, const RatedEvent&) = default;
};

/// Canonical base-(K+1) index of a state, site 1 most significant.
struct StateIndex {
    std::uint64_t value = 0;

    friend auto operator<=>(const StateIndex&, const StateIndex&) = default;
};

/// (K+1)^N. Throws StateSpaceOverflowError above `cap`.
std::uint64_t state_space_size(const ModelParams& params,
                               std::uint64_t cap = std::numeric_limits<std::uint64_t>::max());

StateIndex encode(const LatticeState& state, const ModelParams& params);
LatticeState decode(StateIndex index, const ModelParams& params);

/// Every transition with positive rate out of `state`, each listed once.
std::vector<RatedEvent> enabled_events(const LatticeState& state, const ModelParams& params);

/// Allocation-free variant for the simulation loop; clears `out` first.
void enabled_events_into(const LatticeState& state, const ModelParams& params,
                         std::vector<RatedEvent>& out);

LatticeState apply_event(const LatticeState& state, const Event& event);

}  // namespace ssep

#endif  // SSEP_MODEL_HPP
