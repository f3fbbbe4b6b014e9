#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "floq/rng.hpp"

using namespace floq;

TEST_CASE("philox4x32-10 known-answer vectors", "[rng]") {
    // Reference vectors from the Random123 test suite.
    const Philox4x32::Counter zero = Philox4x32::generate({0, 0, 0, 0}, {0, 0});
    CHECK(zero == Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});

    const Philox4x32::Counter ones = Philox4x32::generate(
        {0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
    CHECK(ones == Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});

    const Philox4x32::Counter pi = Philox4x32::generate(
        {0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
    CHECK(pi == Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("counter streams are deterministic and decorrelated", "[rng]") {
    CHECK(unit_uniform(42, RngStream::kInitialPhases, 7, 0) ==
          unit_uniform(42, RngStream::kInitialPhases, 7, 0));
    CHECK(unit_uniform(42, RngStream::kInitialPhases, 7, 0) !=
          unit_uniform(42, RngStream::kMeasurement, 7, 0));
    CHECK(unit_uniform(42, RngStream::kInitialPhases, 7, 0) !=
          unit_uniform(43, RngStream::kInitialPhases, 7, 0));

    std::set<double> values;
    for (std::uint32_t c = 0; c < 1000; ++c) {
        const double u = unit_uniform(1, RngStream::kInitialPhases, c, 0);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        values.insert(u);
    }
    CHECK(values.size() == 1000);
}

TEST_CASE("uniform mean and variance match U[0,1)", "[rng]") {
    const int n = 200000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = unit_uniform(7, RngStream::kInitialPhases, i, 1);
        sum += u;
        sumsq += u * u;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    // 5 sigma on the mean of U[0,1): sigma_mean = 1/sqrt(12 n).
    CHECK(std::fabs(mean - 0.5) < 5.0 / std::sqrt(12.0 * n));
    CHECK(std::fabs(var - 1.0 / 12.0) < 0.002);
}
