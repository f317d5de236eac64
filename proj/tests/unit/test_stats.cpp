#include "doctest.h"

#include "lrperc/replicas.hpp"
#include "lrperc/stats.hpp"

#include <stdexcept>

using namespace lrperc;

TEST_CASE("wilson reference values")
{
    // independent package at the exact 97.5% normal quantile
    const double z975 = 1.959963984540054;
    auto [lo, hi] = wilson_interval(5, 10, z975);
    CHECK(lo == doctest::Approx(0.23659309051256394).epsilon(1e-12));
    CHECK(hi == doctest::Approx(0.7634069094874361).epsilon(1e-12));
    CHECK(wilson_interval(0, 10, z975).second == doctest::Approx(0.27753279986288926).epsilon(1e-12));
    CHECK(wilson_interval(10, 10, z975).first == doctest::Approx(0.7224672001371106).epsilon(1e-12));

    // hand evaluation of the score formula at z = 1.96
    CHECK(wilson_interval(5, 10).first == doctest::Approx(0.23658959361548731).epsilon(1e-12));
    CHECK(wilson_interval(5, 10).second == doctest::Approx(0.7634104063845126).epsilon(1e-12));
    CHECK(wilson_interval(0, 10).first == 0.0);
    CHECK(wilson_interval(0, 10).second == doctest::Approx(0.2775401687666166).epsilon(1e-12));
    CHECK(wilson_interval(10, 10).second == 1.0);
    for (double z : {0.5, 1.0, 3.0}) {
        CHECK(wilson_interval(0, 37, z).first == 0.0);
        CHECK(wilson_interval(37, 37, z).second == 1.0);
    }
}

TEST_CASE("wilson interval is symmetric and nested")
{
    for (std::uint64_t s = 0; s <= 20; ++s) {
        auto a = wilson_interval(s, 20, 1.96);
        auto b = wilson_interval(20 - s, 20, 1.96);
        CHECK(a.first == doctest::Approx(1.0 - b.second));
        auto wide = wilson_interval(s, 20, 3.0);
        CHECK(wide.first <= a.first);
        CHECK(wide.second >= a.second);
        CHECK(a.first <= static_cast<double>(s) / 20.0);
        CHECK(a.second >= static_cast<double>(s) / 20.0);
    }
}

TEST_CASE("wilson rejects bad input")
{
    CHECK_THROWS_AS(wilson_interval(1, 0), std::invalid_argument);
    CHECK_THROWS_AS(wilson_interval(5, 4), std::invalid_argument);
    CHECK_THROWS_AS(wilson_interval(1, 4, 0.0), std::invalid_argument);
}

TEST_CASE("estimate from counts")
{
    auto e = EstimateWithCI::from_counts(30, 120);
    CHECK(e.estimate == 0.25);
    CHECK(e.contains(0.25));
    CHECK_FALSE(e.contains(0.9));
    CHECK(e.z == kDefaultZ);
}

TEST_CASE("indicator correlation")
{
    CHECK(indicator_correlation(10, 0, 0, 10) == doctest::Approx(1.0));
    CHECK(indicator_correlation(0, 10, 10, 0) == doctest::Approx(-1.0));
    CHECK(indicator_correlation(25, 25, 25, 25) == doctest::Approx(0.0));
    CHECK(indicator_correlation(10, 5, 0, 0) == 0.0);
}

TEST_CASE("replica runner is order independent")
{
    auto square = [](std::uint64_t r) -> std::uint64_t { return r * r + 1; };
    auto one = run_replicas(1000, 1, square);
    auto many = run_replicas(1000, 8, square);
    CHECK(one == many);
    CHECK(run_replicas(0, 4, square).empty());
    CHECK_THROWS_AS(run_replicas(50, 4,
                                 [](std::uint64_t r) -> int {
                                     if (r == 17) throw std::runtime_error("boom");
                                     return 0;
                                 }),
                    std::runtime_error);
}
