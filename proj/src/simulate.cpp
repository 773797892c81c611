#include "ssep/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>

namespace ssep {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

void SimConfig::validate() const
{
    if (max_events < 1)
        throw InvalidConfigError("max_events must be at least 1");
    if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0))
        throw InvalidConfigError("warmup_fraction must lie in [0, 1)");
    if (replicas < 1)
        throw InvalidConfigError("replicas must be at least 1");
}

std::uint64_t SimConfig::warmup_events() const
{
    return static_cast<std::uint64_t>(std::floor(warmup_fraction * static_cast<double>(max_events)));
}

std::uint64_t ReplicaRng::stream_seed(std::uint64_t seed, std::uint64_t replica_index)
{
    return splitmix64(seed ^ splitmix64(replica_index));
}

std::string ReplicaRng::description()
{
    return "std::mt19937_64; stream seed = splitmix64(seed ^ splitmix64(replica_index)); "
           "uniform = (draw >> 11) * 2^-53; exponential = -log(((draw >> 11) + 0.5) * 2^-53) / rate";
}

double ReplicaRng::exponential(double rate)
{
    const double u = (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    return -std::log(u) / rate;
}

bool operator==(const SimStats& a, const SimStats& b)
{
    auto same = [](const auto& x, const auto& y) {
        return x.rows() == y.rows() && x.cols() == y.cols() && x == y;
    };
    return a.params == b.params && a.replica_ids == b.replica_ids && a.total_time == b.total_time &&
           same(a.site_occupancy_time, b.site_occupancy_time) &&
           same(a.state_occupancy_time, b.state_occupancy_time) &&
           a.arrivals_by_type == b.arrivals_by_type && a.departures_by_type == b.departures_by_type &&
           a.completed_sojourns == b.completed_sojourns && a.event_count == b.event_count &&
           a.window_start_counts == b.window_start_counts &&
           a.window_end_counts == b.window_end_counts && a.trajectory == b.trajectory &&
           a.particles == b.particles;
}

namespace {

NextEvent sample_from(const std::vector<RatedEvent>& events, ReplicaRng& rng)
{
    double total = 0.0;
    for (const RatedEvent& e : events)
        total += e.rate;
    const double dt = rng.exponential(total);
    const double target = rng.uniform() * total;
    double acc = 0.0;
    for (const RatedEvent& e : events) {
        acc += e.rate;
        if (target < acc)
            return {dt, e.event};
    }
    return {dt, events.back().event};
}

std::vector<std::int64_t> type_counts(const LatticeState& state, int n_types)
{
    std::vector<std::int64_t> out(static_cast<std::size_t>(n_types), 0);
    for (int x : state.sites)
        if (x > 0)
            ++out[static_cast<std::size_t>(x - 1)];
    return out;
}

struct Tag {
    std::uint64_t id = 0;
    double arrival_time = 0.0;
    bool arrived_in_window = false;
};

}  // namespace

NextEvent sample_next_event(const LatticeState& state, const ModelParams& params, ReplicaRng& rng)
{
    std::vector<RatedEvent> events;
    enabled_events_into(state, params, events);
    return sample_from(events, rng);
}

SimStats run_replica(const ModelParams& params, const SimConfig& config, std::uint64_t replica_index)
{
    params.validate();
    config.validate();
    const int n = params.n_sites;
    const int k_types = params.n_types;

    bool track_joint = false;
    try {
        track_joint = state_space_size(params, kJointOccupancyLimit) > 0;
    } catch (const StateSpaceOverflowError&) {
    }

    SimStats stats;
    stats.params = params;
    stats.replica_ids = {replica_index};
    stats.site_occupancy_time = Eigen::MatrixXd::Zero(n, k_types + 1);
    if (track_joint)
        stats.state_occupancy_time =
            Eigen::VectorXd::Zero(static_cast<Eigen::Index>(state_space_size(params)));
    stats.arrivals_by_type.assign(static_cast<std::size_t>(k_types), 0);
    stats.departures_by_type.assign(static_cast<std::size_t>(k_types), 0);
    stats.completed_sojourns.assign(static_cast<std::size_t>(k_types), {});

    ReplicaRng rng(config.seed, replica_index);
    LatticeState state = LatticeState::vacant(n);
    std::vector<Tag> tags(static_cast<std::size_t>(n) + 1);
    std::vector<std::size_t> particle_slot(static_cast<std::size_t>(n) + 1, 0);
    std::vector<RatedEvent> events;
    events.reserve(static_cast<std::size_t>(2 * n + 2 * k_types));

    const std::uint64_t warmup = config.warmup_events();
    std::uint64_t next_id = 0;
    double t = 0.0;
    double window_start = 0.0;
    bool measuring = false;

    for (std::uint64_t e = 0; e < config.max_events; ++e) {
        if (e == warmup) {
            measuring = true;
            window_start = t;
            stats.window_start_counts = type_counts(state, k_types);
        }
        enabled_events_into(state, params, events);
        const NextEvent next = sample_from(events, rng);

        if (measuring) {
            for (int i = 1; i <= n; ++i)
                stats.site_occupancy_time(i - 1, state.at(i)) += next.dt;
            if (track_joint)
                stats.state_occupancy_time(static_cast<Eigen::Index>(encode(state, params).value)) +=
                    next.dt;
            ++stats.event_count;
        }
        t += next.dt;

        const Event& ev = next.event;
        const auto k = static_cast<std::size_t>(ev.ptype - 1);
        const auto site = static_cast<std::size_t>(ev.site);
        switch (ev.kind) {
        case EventKind::Arrival:
            state.at(ev.site) = ev.ptype;
            tags[site] = {next_id++, t, measuring};
            if (measuring)
                ++stats.arrivals_by_type[k];
            if (config.record_trajectory) {
                particle_slot[site] = stats.particles.size();
                stats.particles.push_back({tags[site].id, ev.ptype, t, std::nullopt});
            }
            break;
        case EventKind::Departure:
            state.at(ev.site) = 0;
            if (measuring) {
                ++stats.departures_by_type[k];
                if (tags[site].arrived_in_window)
                    stats.completed_sojourns[k].push_back(t - tags[site].arrival_time);
            }
            if (config.record_trajectory)
                stats.particles[particle_slot[site]].departure_time = t;
            break;
        case EventKind::HopLeft:
        case EventKind::HopRight: {
            const auto to = static_cast<std::size_t>(ev.target());
            state.at(ev.target()) = ev.ptype;
            state.at(ev.site) = 0;
            tags[to] = tags[site];
            particle_slot[to] = particle_slot[site];
            break;
        }
        }
        if (config.record_trajectory)
            stats.trajectory.push_back({t, ev, state});
    }

    stats.total_time = t - window_start;
    stats.window_end_counts = type_counts(state, k_types);
    return stats;
}

std::vector<SimStats> run_replicas(const ModelParams& params, const SimConfig& config)
{
    config.validate();
    std::vector<std::future<SimStats>> futures;
    futures.reserve(static_cast<std::size_t>(config.replicas));
    for (int r = 0; r < config.replicas; ++r)
        futures.push_back(std::async(std::launch::async, [&params, &config, r] {
            return run_replica(params, config, static_cast<std::uint64_t>(r));
        }));
    std::vector<SimStats> out;
    out.reserve(futures.size());
    for (auto& f : futures)
        out.push_back(f.get());
    return out;
}

SimStats merge_replicas(std::span<const SimStats> stats)
{
    if (stats.empty())
        throw InvalidConfigError("merge_replicas needs at least one input");
    for (const SimStats& s : stats)
        if (!(s.params == stats.front().params))
            throw MixedModelError("cannot merge statistics of different models");

    std::vector<const SimStats*> order;
    for (const SimStats& s : stats)
        order.push_back(&s);
    std::stable_sort(order.begin(), order.end(), [](const SimStats* a, const SimStats* b) {
        return a->replica_ids < b->replica_ids;
    });

    SimStats out = *order.front();
    out.trajectory.clear();
    out.particles.clear();
    for (std::size_t r = 1; r < order.size(); ++r) {
        const SimStats& s = *order[r];
        out.replica_ids.insert(out.replica_ids.end(), s.replica_ids.begin(), s.replica_ids.end());
        out.total_time += s.total_time;
        out.site_occupancy_time += s.site_occupancy_time;
        if (out.state_occupancy_time.size() == s.state_occupancy_time.size())
            out.state_occupancy_time += s.state_occupancy_time;
        out.event_count += s.event_count;
        for (std::size_t k = 0; k < out.arrivals_by_type.size(); ++k) {
            out.arrivals_by_type[k] += s.arrivals_by_type[k];
            out.departures_by_type[k] += s.departures_by_type[k];
            out.window_start_counts[k] += s.window_start_counts[k];
            out.window_end_counts[k] += s.window_end_counts[k];
            out.completed_sojourns[k].insert(out.completed_sojourns[k].end(),
                                             s.completed_sojourns[k].begin(),
                                             s.completed_sojourns[k].end());
        }
    }
    return out;
}

}  // namespace ssep
