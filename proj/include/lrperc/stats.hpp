#pragma once

#include <cstdint>
#include <utility>

namespace lrperc {

inline constexpr double kDefaultZ = 1.96;

// Wilson score interval for successes/trials, clamped to [0,1].
// Requires 0 <= successes <= trials, trials >= 1, z > 0.
std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kDefaultZ);

struct EstimateWithCI {
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;
    double estimate = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    double z = kDefaultZ;

    static EstimateWithCI from_counts(std::uint64_t successes, std::uint64_t trials, double z = kDefaultZ);

    bool contains(double value) const { return lo <= value && value <= hi; }
};

/// Pearson correlation of two 0/1 sequences given the four joint counts.
/// Returns 0 when either marginal is degenerate.
double indicator_correlation(std::uint64_t n11, std::uint64_t n10, std::uint64_t n01, std::uint64_t n00);

} // namespace lrperc
