#ifndef SSEP_REVERSIBILITY_HPP
#define SSEP_REVERSIBILITY_HPP

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "ssep/exact.hpp"

namespace ssep {

class ZeroProbabilityError : public Error {
public:
    using Error::Error;
};

class NonStationaryError : public Error {
public:
    using Error::Error;
};

class ConditionViolatedError : public Error {
public:
    using Error::Error;
};

/// Class of the single event taking state `from` to state `to`, read off
/// the change in particle count.
TransitionClass classify_transition(const ModelParams& params, Eigen::Index from, Eigen::Index to);

struct BalanceReport {
    double max_abs_residual = 0.0;  // max |p_i q_ij - p_j q_ji| over q_ij > 0
    std::pair<Eigen::Index, Eigen::Index> worst_pair{-1, -1};
    std::array<double, 3> class_max{};  // indexed by TransitionClass
};

BalanceReport detailed_balance_residual(const Generator& gen, const Distribution& dist);

/// Time-reversed chain: entry (i, j) is p_j q_ji / p_i.
using ReversedGenerator = Generator;

/// Throws ZeroProbabilityError for a non-positive entry and
/// NonStationaryError when the balance residual of `dist` exceeds
/// `stationarity_tolerance`.
ReversedGenerator reversed_generator(const Generator& gen, const Distribution& dist,
                                     double stationarity_tolerance = 1e-8);

/// Largest entrywise difference between two rate matrices of equal size.
double max_rate_difference(const Generator& a, const Generator& b);

struct CycleOptions {
    Eigen::Index exhaustive_limit = 729;  // enumerate every cycle up to this many states
    int sampled_starts = 64;              // start states drawn above the limit
    std::uint64_t max_cycles_per_start = 200'000;
    std::uint64_t seed = 0x5eed;
};

struct CycleReport {
    double max_residual = 0.0;
    std::uint64_t cycles = 0;
    std::vector<Eigen::Index> worst_cycle;
    bool exhaustive = true;
};

/// Kolmogorov criterion over directed simple cycles of length 2..max_cycle_len:
/// the largest |forward product - reverse product| / forward product.
/// A cycle using an edge without a reverse edge scores 1.
CycleReport kolmogorov_cycle_residual(const Generator& gen, int max_cycle_len,
                                      const CycleOptions& options = {});

/// Max |p(x) - (K+1)^-N| of the solved stationary distribution; requires
/// alpha_k == beta_k for every type.
double uniformity_check(const ModelParams& params, const SolveOptions& options = {});

bool arrival_equals_departure(const ModelParams& params);

}  // namespace ssep

#endif  // SSEP_REVERSIBILITY_HPP
