#include "ssep/model.hpp"

#include <cmath>
#include <sstream>

namespace ssep {

void ModelParams::validate() const
{
    if (n_sites < 2)
        throw InvalidModelError("n_sites must be at least 2, got " + std::to_string(n_sites));
    if (n_types < 1)
        throw InvalidModelError("n_types must be at least 1, got " + std::to_string(n_types));
    auto check_vector = [this](const Eigen::VectorXd& v, const char* name, bool allow_zero) {
        if (v.size() != n_types)
            throw InvalidModelError(std::string(name) + " must have " + std::to_string(n_types) +
                                    " entries, got " + std::to_string(v.size()));
        for (Eigen::Index k = 0; k < v.size(); ++k) {
            const double x = v(k);
            if (!std::isfinite(x) || x < 0.0 || (!allow_zero && x == 0.0))
                throw InvalidModelError(std::string(name) + "[" + std::to_string(k + 1) +
                                        "] must be " + (allow_zero ? "non-negative" : "positive"));
        }
    };
    check_vector(alpha, "alpha", false);
    check_vector(beta, "beta", false);
    check_vector(delta, "delta", true);
}

bool operator==(const ModelParams& a, const ModelParams& b)
{
    return a.n_sites == b.n_sites && a.n_types == b.n_types &&
           a.boundary_hops == b.boundary_hops && a.alpha.size() == b.alpha.size() &&
           a.beta.size() == b.beta.size() && a.delta.size() == b.delta.size() &&
           a.alpha == b.alpha && a.beta == b.beta && a.delta == b.delta;
}

ModelParams make_params(int n_sites, const std::vector<double>& alpha,
                        const std::vector<double>& beta, const std::vector<double>& delta,
                        bool boundary_hops)
{
    ModelParams p;
    p.n_sites = n_sites;
    p.n_types = static_cast<int>(alpha.size());
    p.alpha = Eigen::Map<const Eigen::VectorXd>(alpha.data(), static_cast<Eigen::Index>(alpha.size()));
    p.beta = Eigen::Map<const Eigen::VectorXd>(beta.data(), static_cast<Eigen::Index>(beta.size()));
    p.delta = Eigen::Map<const Eigen::VectorXd>(delta.data(), static_cast<Eigen::Index>(delta.size()));
    p.boundary_hops = boundary_hops;
    p.validate();
    return p;
}

int LatticeState::count(int type) const
{
    int n = 0;
    for (int x : sites)
        n += (x == type);
    return n;
}

std::string to_string(const LatticeState& state)
{
    std::string out = "(";
    for (std::size_t i = 0; i < state.sites.size(); ++i) {
        if (i)
            out += ',';
        out += std::to_string(state.sites[i]);
    }
    return out + ")";
}

void check_state(const LatticeState& state, const ModelParams& params)
{
    if (state.size() != params.n_sites)
        throw InvalidStateError("state has " + std::to_string(state.size()) + " sites, model has " +
                                std::to_string(params.n_sites));
    for (int x : state.sites)
        if (x < 0 || x > params.n_types)
            throw InvalidStateError("site entry " + std::to_string(x) + " outside [0, " +
                                    std::to_string(params.n_types) + "]");
}

TransitionClass Event::transition_class() const
{
    switch (kind) {
    case EventKind::Arrival: return TransitionClass::Arrival;
    case EventKind::Departure: return TransitionClass::Departure;
    default: return TransitionClass::Hop;
    }
}

int Event::target() const
{
    switch (kind) {
    case EventKind::HopLeft: return site - 1;
    case EventKind::HopRight: return site + 1;
    default: return site;
    }
}

std::string to_string(EventKind kind)
{
    switch (kind) {
    case EventKind::Arrival: return "Arrival";
    case EventKind::Departure: return "Departure";
    case EventKind::HopLeft: return "HopLeft";
    case EventKind::HopRight: return "HopRight";
    }
    return "?";
}

std::string to_string(const Event& event)
{
    std::ostringstream os;
    os << to_string(event.kind) << "(type " << event.ptype << ", site " << event.site << ")";
    return os.str();
}

Event inverse(const Event& event)
{
    switch (event.kind) {
    case EventKind::Arrival: return {EventKind::Departure, event.site, event.ptype};
    case EventKind::Departure: return {EventKind::Arrival, event.site, event.ptype};
    case EventKind::HopLeft: return {EventKind::HopRight, event.site - 1, event.ptype};
    case EventKind::HopRight: return {EventKind::HopLeft, event.site + 1, event.ptype};
    }
    return event;
}

std::uint64_t state_space_size(const ModelParams& params, std::uint64_t cap)
{
    params.validate();
    const std::uint64_t base = static_cast<std::uint64_t>(params.n_types) + 1;
    std::uint64_t m = 1;
    for (int i = 0; i < params.n_sites; ++i) {
        if (m > cap / base)
            throw StateSpaceOverflowError(
                "state space (" + std::to_string(base) + ")^" + std::to_string(params.n_sites) +
                    " exceeds the limit of " + std::to_string(cap) + " states",
                cap);
        m *= base;
    }
    return m;
}

StateIndex encode(const LatticeState& state, const ModelParams& params)
{
    check_state(state, params);
    const std::uint64_t base = static_cast<std::uint64_t>(params.n_types) + 1;
    std::uint64_t index = 0;
    for (int x : state.sites)
        index = index * base + static_cast<std::uint64_t>(x);
    return {index};
}

LatticeState decode(StateIndex index, const ModelParams& params)
{
    const std::uint64_t m = state_space_size(params);
    if (index.value >= m)
        throw InvalidStateError("state index " + std::to_string(index.value) + " outside [0, " +
                                std::to_string(m) + ")");
    const std::uint64_t base = static_cast<std::uint64_t>(params.n_types) + 1;
    LatticeState state = LatticeState::vacant(params.n_sites);
    std::uint64_t rest = index.value;
    for (int i = params.n_sites; i >= 1; --i) {
        state.at(i) = static_cast<int>(rest % base);
        rest /= base;
    }
    return state;
}

void enabled_events_into(const LatticeState& state, const ModelParams& params,
                         std::vector<RatedEvent>& out)
{
    out.clear();
    const int n = params.n_sites;
    for (int i = 1; i <= n; ++i) {
        const int x = state.at(i);
        const bool boundary = (i == 1 || i == n);
        if (boundary) {
            if (x == 0) {
                for (int k = 1; k <= params.n_types; ++k)
                    out.push_back({{EventKind::Arrival, i, k}, params.arrival(k)});
            } else {
                out.push_back({{EventKind::Departure, i, x}, params.departure(x)});
            }
        }
        if (x == 0 || (boundary && !params.boundary_hops) || params.hop(x) <= 0.0)
            continue;
        if (i > 1 && state.at(i - 1) == 0)
            out.push_back({{EventKind::HopLeft, i, x}, params.hop(x)});
        if (i < n && state.at(i + 1) == 0)
            out.push_back({{EventKind::HopRight, i, x}, params.hop(x)});
    }
}

std::vector<RatedEvent> enabled_events(const LatticeState& state, const ModelParams& params)
{
    check_state(state, params);
    std::vector<RatedEvent> out;
    enabled_events_into(state, params, out);
    return out;
}

LatticeState apply_event(const LatticeState& state, const Event& event)
{
    const int n = state.size();
    auto fail = [&](const char* why) {
        throw EventNotEnabledError(to_string(event) + " not enabled in " + to_string(state) + ": " + why);
    };
    if (event.site < 1 || event.site > n)
        fail("site out of range");
    if (event.ptype < 1)
        fail("type out of range");
    LatticeState next = state;
    switch (event.kind) {
    case EventKind::Arrival:
        if (event.site != 1 && event.site != n)
            fail("arrivals happen only at boundary sites");
        if (state.at(event.site) != 0)
            fail("site occupied");
        next.at(event.site) = event.ptype;
        break;
    case EventKind::Departure:
        if (event.site != 1 && event.site != n)
            fail("departures happen only at boundary sites");
        if (state.at(event.site) != event.ptype)
            fail("site does not hold a particle of that type");
        next.at(event.site) = 0;
        break;
    case EventKind::HopLeft:
    case EventKind::HopRight: {
        const int to = event.target();
        if (to < 1 || to > n)
            fail("target site out of range");
        if (state.at(event.site) != event.ptype)
            fail("site does not hold a particle of that type");
        if (state.at(to) != 0)
            fail("target site occupied");
        next.at(to) = event.ptype;
        next.at(event.site) = 0;
        break;
    }
    }
    return next;
}

}  // namespace ssep
