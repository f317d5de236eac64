#include "lrperc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lrperc {

std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials, double z)
{
    if (trials == 0) throw std::invalid_argument("wilson_interval: trials must be >= 1");
    if (successes > trials) throw std::invalid_argument("wilson_interval: successes exceed trials");
    if (!(z > 0.0)) throw std::invalid_argument("wilson_interval: z must be > 0");

    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (phat + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;

    double lo = successes == 0 ? 0.0 : std::clamp(centre - half, 0.0, 1.0);
    double hi = successes == trials ? 1.0 : std::clamp(centre + half, 0.0, 1.0);
    // Rounding can push an endpoint across the point estimate at the extremes.
    lo = std::min(lo, phat);
    hi = std::max(hi, phat);
    return {lo, hi};
}

EstimateWithCI EstimateWithCI::from_counts(std::uint64_t successes, std::uint64_t trials, double z)
{
    auto [lo, hi] = wilson_interval(successes, trials, z);
    return {successes, trials, static_cast<double>(successes) / static_cast<double>(trials), lo, hi, z};
}

double indicator_correlation(std::uint64_t n11, std::uint64_t n10, std::uint64_t n01, std::uint64_t n00)
{
    const double n = static_cast<double>(n11 + n10 + n01 + n00);
    if (n == 0.0) return 0.0;
    const double a = static_cast<double>(n11 + n10) / n; // P(X=1)
    const double b = static_cast<double>(n11 + n01) / n; // P(Y=1)
    const double va = a * (1.0 - a);
    const double vb = b * (1.0 - b);
    if (va <= 0.0 || vb <= 0.0) return 0.0;
    return (static_cast<double>(n11) / n - a * b) / std::sqrt(va * vb);
}

} // namespace lrperc
