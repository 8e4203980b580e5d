#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "spde/fbm.hpp"
#include "spde/grid.hpp"
#include "spde/reference.hpp"

using namespace spde;

namespace {

// Sample second moments of path coordinates across many modes of one path set.
struct PairMoments {
    double m11 = 0.0, m22 = 0.0, m12 = 0.0, m1111 = 0.0, m2222 = 0.0;
    int n = 0;
};

PairMoments pair_moments(const FbmPathSet& set, int i, int j) {
    PairMoments m;
    for (int k = 0; k < set.n_modes; ++k) {
        const double* p = set.row(k);
        double a = p[i], b = p[j];
        m.m11 += a * a;
        m.m22 += b * b;
        m.m12 += a * b;
        m.m1111 += a * a * a * a;
        m.m2222 += b * b * b * b;
        ++m.n;
    }
    m.m11 /= m.n;
    m.m22 /= m.n;
    m.m12 /= m.n;
    m.m1111 /= m.n;
    m.m2222 /= m.n;
    return m;
}

// Gaussian cross moment E[a^2 b^2] = v1 v2 + 2 c^2 gives the variance of the
// sample covariance, hence a standard error for the mean of n products.
void check_cov_4se(const FbmPathSet& set, double hurst, int i, int j) {
    const TimeGrid& grid = set.grid;
    PairMoments m = pair_moments(set, i, j);
    double expect = fbm_covariance(grid.t(i), grid.t(j), hurst);
    double v1 = std::pow(grid.t(i), 2.0 * hurst);
    double v2 = std::pow(grid.t(j), 2.0 * hurst);
    double se = oracles::product_moment_se(v1, v2, expect, m.n);
    INFO("hurst=", hurst, " i=", i, " j=", j);
    CHECK(std::fabs(m.m12 - expect) < 4.0 * se);
}

}  // namespace

TEST_CASE("covariance kernel closed forms") {
    CHECK(fbm_covariance(1.0, 1.0, 0.3) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(fbm_covariance(1.0, 2.0, 0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(fbm_covariance(1.0, 3.0, 0.75) ==
          doctest::Approx(1.6838626489802209).epsilon(1e-14));
    CHECK(fbm_covariance(2.0, 1.0, 0.2) == fbm_covariance(1.0, 2.0, 0.2));
    CHECK(fbm_covariance(0.0, 5.0, 0.7) == 0.0);
    CHECK_THROWS_AS(fbm_covariance(1.0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(fbm_covariance(1.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(fbm_covariance(-1.0, 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("paths start at zero and repeat bit for bit") {
    TimeGrid grid(1.0, 64);
    FbmPathSet a = sample_fbm_paths(grid, 0.3, 8, 1234);
    FbmPathSet b = sample_fbm_paths(grid, 0.3, 8, 1234);
    REQUIRE(a.n_modes == 8);
    REQUIRE(int(a.paths.size()) == 8 * 65);
    for (int k = 0; k < 8; ++k)
        CHECK(a.row(k)[0] == 0.0);
    CHECK(a.paths == b.paths);

    FbmPathSet c = sample_fbm_paths(grid, 0.3, 8, 1235);
    CHECK(a.paths != c.paths);

    FbmOptions opts;
    opts.run = 7;
    FbmPathSet d = sample_fbm_paths(grid, 0.3, 8, 1234, opts);
    CHECK(a.paths != d.paths);
}

TEST_CASE("parallel and serial sampling agree bit for bit") {
    TimeGrid grid(2.0, 128);
    for (double hurst : {0.2, 0.5, 0.8}) {
        FbmPathSet par = sample_fbm_paths(grid, hurst, 16, 99);
        FbmPathSet ser = reference::sample_fbm_paths_serial(grid, hurst, 16, 99);
        CHECK(par.paths == ser.paths);
        CHECK(par.method == ser.method);
    }
}

TEST_CASE("method selection and naming") {
    TimeGrid grid(1.0, 32);
    FbmSampler autoc(grid, 0.3);
    CHECK(autoc.method() == "circulant");
    FbmOptions opts;
    opts.method = FbmOptions::Method::kCholesky;
    FbmSampler chol(grid, 0.3, opts.method);
    CHECK(chol.method() == "cholesky");
    CHECK(chol.grid().n_steps == 32);
    CHECK(chol.hurst() == 0.3);
}

TEST_CASE("covariance matches the kernel within four standard errors") {
    TimeGrid grid(1.0, 64);
    const int n_paths = 4000;
    const int pairs[5][2] = {{64, 64}, {32, 32}, {32, 64}, {16, 48}, {8, 56}};
    for (double hurst : {0.2, 0.5, 0.8}) {
        FbmPathSet set = sample_fbm_paths(grid, hurst, n_paths, 4242);
        for (auto& pr : pairs)
            check_cov_4se(set, hurst, pr[0], pr[1]);
    }
}

TEST_CASE("cholesky method also matches the kernel") {
    TimeGrid grid(1.0, 32);
    FbmOptions opts;
    opts.method = FbmOptions::Method::kCholesky;
    FbmPathSet set = sample_fbm_paths(grid, 0.3, 4000, 777, opts);
    CHECK(set.method == "cholesky");
    const int pairs[4][2] = {{32, 32}, {16, 16}, {16, 32}, {8, 24}};
    for (auto& pr : pairs)
        check_cov_4se(set, 0.3, pr[0], pr[1]);
}

TEST_CASE("increments are stationary") {
    TimeGrid grid(1.0, 64);
    const int lag = 16;
    for (double hurst : {0.2, 0.8}) {
        FbmPathSet set = sample_fbm_paths(grid, hurst, 4000, 31);
        double expect = std::pow(grid.t(lag), 2.0 * hurst);
        for (int start : {0, 16, 48 - lag + 16}) {
            int i = start, j = start + lag;
            if (j > 64) continue;
            double s = 0.0;
            for (int k = 0; k < set.n_modes; ++k) {
                double d = set.row(k)[j] - set.row(k)[i];
                s += d * d;
            }
            s /= set.n_modes;
            double se = oracles::product_moment_se(expect, expect, expect, set.n_modes);
            INFO("hurst=", hurst, " start=", start);
            CHECK(std::fabs(s - expect) < 4.0 * se);
        }
    }
}

TEST_CASE("brownian case has independent disjoint increments") {
    TimeGrid grid(1.0, 64);
    FbmPathSet set = sample_fbm_paths(grid, 0.5, 2000, 55);
    double num = 0.0, va = 0.0, vb = 0.0;
    for (int k = 0; k < set.n_modes; ++k) {
        const double* p = set.row(k);
        double a = p[32] - p[0];
        double b = p[64] - p[32];
        num += a * b;
        va += a * a;
        vb += b * b;
    }
    double corr = num / std::sqrt(va * vb);
    CHECK(std::fabs(corr) < 4.0 / std::sqrt(double(set.n_modes)));
}

TEST_CASE("invalid arguments are rejected") {
    TimeGrid grid(1.0, 16);
    CHECK_THROWS_AS(FbmSampler(grid, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(FbmSampler(grid, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(sample_fbm_paths(grid, 0.5, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_fbm_paths(grid, 0.5, -3, 1), std::invalid_argument);
}
