#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "spde/fft.hpp"
#include "spde/rng.hpp"

using namespace spde;

TEST_CASE("philox known-answer vectors") {
    auto r0 = Philox4x32::block({0, 0, 0, 0}, {0, 0});
    CHECK(r0[0] == 0x6627e8d5u);
    CHECK(r0[1] == 0xe169c58du);
    CHECK(r0[2] == 0xbc57ac4cu);
    CHECK(r0[3] == 0x9b00dbd8u);

    auto r1 = Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                {0xffffffffu, 0xffffffffu});
    CHECK(r1[0] == 0x408f276du);
    CHECK(r1[1] == 0x41c83b0eu);
    CHECK(r1[2] == 0xa20bc7c6u);
    CHECK(r1[3] == 0x6d5451fdu);

    auto r2 = Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                {0xa4093822u, 0x299f31d0u});
    CHECK(r2[0] == 0xd16cfe09u);
    CHECK(r2[1] == 0x94fdccebu);
    CHECK(r2[2] == 0x5001e420u);
    CHECK(r2[3] == 0x24126ea1u);
}

TEST_CASE("philox separates counters and keys") {
    auto base = Philox4x32::block({1, 2, 3, 4}, {5, 6});
    CHECK(Philox4x32::block({1, 2, 3, 5}, {5, 6}) != base);
    CHECK(Philox4x32::block({1, 2, 3, 4}, {5, 7}) != base);
}

TEST_CASE("substream indexing matches bulk fill") {
    GaussianSubstream g(0x123456789abcdef0ull, 3, 17, 1);
    std::vector<double> bulk = g.draw(257);
    for (std::uint64_t i = 0; i < bulk.size(); ++i) CHECK(g(i) == bulk[i]);

    std::vector<double> filled(257);
    g.fill(filled.data(), filled.size());
    CHECK(filled == bulk);
}

TEST_CASE("substreams with distinct identities disagree") {
    GaussianSubstream base(42, 0, 0, 0);
    std::vector<double> b = base.draw(16);
    CHECK(GaussianSubstream(43, 0, 0, 0).draw(16) != b);
    CHECK(GaussianSubstream(42, 1, 0, 0).draw(16) != b);
    CHECK(GaussianSubstream(42, 0, 1, 0).draw(16) != b);
    CHECK(GaussianSubstream(42, 0, 0, 1).draw(16) != b);
}

TEST_CASE("gaussian draws have standard normal moments") {
    GaussianSubstream g(2026, 0, 0, 0);
    const std::size_t n = 100000;
    std::vector<double> z = g.draw(n);

    double mean = 0.0, var = 0.0, below = 0.0, lag1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::isfinite(z[i]));
        mean += z[i];
        if (z[i] < 0.0) below += 1.0;
        if (i) lag1 += z[i] * z[i - 1];
    }
    mean /= double(n);
    for (double v : z) var += (v - mean) * (v - mean);
    var /= double(n - 1);
    lag1 /= double(n - 1);

    CHECK(std::fabs(mean) < 4.0 / std::sqrt(double(n)));
    CHECK(std::fabs(var - 1.0) < 4.0 * std::sqrt(2.0 / double(n)));
    CHECK(std::fabs(below / double(n) - 0.5) < 4.0 * 0.5 / std::sqrt(double(n)));
    CHECK(std::fabs(lag1) < 4.0 / std::sqrt(double(n)));
}

TEST_CASE("fft matches the naive transform") {
    const std::size_t n = 16;
    std::uint64_t state = 7;
    std::vector<std::complex<double>> a(n);
    for (auto& v : a)
        v = {oracles::test_uniform(state) - 0.5, oracles::test_uniform(state) - 0.5};

    std::vector<std::complex<double>> expect = oracles::naive_dft(a);
    Radix2Fft fft(n);
    std::vector<std::complex<double>> got = a;
    fft.forward(got);
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(got[k] - expect[k]) < 1e-12);
}

TEST_CASE("fft sends a pure tone to a single bin") {
    const std::size_t n = 64, k0 = 5;
    const double two_pi = 6.28318530717958647692528676656;
    std::vector<std::complex<double>> a(n);
    for (std::size_t j = 0; j < n; ++j) a[j] = std::polar(1.0, two_pi * double(j * k0) / n);
    Radix2Fft(n).forward(a);
    for (std::size_t k = 0; k < n; ++k) {
        double expect = (k == k0) ? double(n) : 0.0;
        CHECK(std::abs(a[k] - std::complex<double>(expect, 0.0)) < 1e-10);
    }
}

TEST_CASE("fft round trip and Parseval") {
    const std::size_t n = 1024;
    std::uint64_t state = 99;
    std::vector<std::complex<double>> a(n);
    for (auto& v : a)
        v = {oracles::test_uniform(state) - 0.5, oracles::test_uniform(state) - 0.5};

    Radix2Fft fft(n);
    std::vector<std::complex<double>> b = a;
    fft.forward(b);

    double power_time = 0.0, power_freq = 0.0;
    for (std::size_t i = 0; i < n; ++i) power_time += std::norm(a[i]);
    for (std::size_t i = 0; i < n; ++i) power_freq += std::norm(b[i]);
    CHECK(power_freq / double(n) == doctest::Approx(power_time).epsilon(1e-12));

    fft.inverse(b);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(b[i] - a[i]) < 1e-12);
}

TEST_CASE("fft rejects non-power-of-two sizes") {
    CHECK_THROWS_AS(Radix2Fft(12), std::invalid_argument);
    CHECK_THROWS_AS(Radix2Fft(0), std::invalid_argument);
    CHECK_NOTHROW(Radix2Fft(1));
}
