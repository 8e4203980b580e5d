#include "spde/fbm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spde/errors.hpp"
#include "spde/rng.hpp"

namespace spde {

namespace {

// Eigenvalues of the circulant embedding may dip this far below zero
// (relative to the largest) before the factorization is declared failed.
constexpr double kEigenClipTolerance = 1e-12;
constexpr std::size_t kMaxCholeskySteps = 4096;

void require_hurst(double hurst) {
    if (!(hurst > 0.0 && hurst < 1.0))
        throw std::invalid_argument("hurst must lie in (0,1)");
}

// Autocovariance of the increment sequence at lag k for step dt.
double increment_autocov(double hurst, double dt, std::size_t k) {
    double h2 = 2.0 * hurst;
    double kk = double(k);
    double core = std::pow(kk + 1.0, h2) + std::pow(std::fabs(kk - 1.0), h2) -
                  2.0 * std::pow(kk, h2);
    return 0.5 * std::pow(dt, h2) * core;
}

std::size_t next_pow2(std::size_t v) {
    std::size_t p = 1;
    while (p < v) p <<= 1;
    return p;
}

}  // namespace

double fbm_covariance(double s, double t, double hurst) {
    require_hurst(hurst);
    if (!(s >= 0.0) || !(t >= 0.0))
        throw std::invalid_argument("fbm_covariance: times must be non-negative");
    double h2 = 2.0 * hurst;
    return 0.5 * (std::pow(t, h2) + std::pow(s, h2) - std::pow(std::fabs(t - s), h2));
}

FbmSampler::FbmSampler(const TimeGrid& grid, double hurst, FbmOptions::Method method)
    : grid_(grid), hurst_(hurst) {
    require_hurst(hurst);
    switch (method) {
        case FbmOptions::Method::kCholesky:
            build_cholesky();
            break;
        case FbmOptions::Method::kCirculant:
            build_circulant();
            if (method_.empty())
                throw NumericError("FbmSampler: circulant embedding not positive semidefinite");
            break;
        case FbmOptions::Method::kAuto:
            build_circulant();
            if (method_.empty()) build_cholesky();
            break;
    }
}

void FbmSampler::build_circulant() {
    std::size_t n = std::size_t(grid_.n_steps);
    m_ = next_pow2(2 * n);
    fft_ = std::make_shared<Radix2Fft>(m_);

    std::vector<std::complex<double>> row(m_);
    for (std::size_t j = 0; j < m_; ++j)
        row[j] = increment_autocov(hurst_, grid_.dt(), std::min(j, m_ - j));
    fft_->forward(row);

    double max_eig = 0.0, min_eig = 0.0;
    for (const auto& v : row) {
        max_eig = std::max(max_eig, v.real());
        min_eig = std::min(min_eig, v.real());
    }
    if (min_eig < -kEigenClipTolerance * max_eig) {
        m_ = 0;
        fft_.reset();
        return;
    }

    amplitude_.resize(m_);
    for (std::size_t j = 0; j < m_; ++j) {
        double lam = std::max(row[j].real(), 0.0) * double(m_);
        amplitude_[j] = (j == 0 || j == m_ / 2) ? std::sqrt(lam) : std::sqrt(0.5 * lam);
    }
    method_ = "circulant";
}

void FbmSampler::build_cholesky() {
    std::size_t n = std::size_t(grid_.n_steps);
    if (n > kMaxCholeskySteps)
        throw NumericError("FbmSampler: embedding failed and grid too large for dense fallback");

    chol_.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j)
            chol_[i * n + j] = increment_autocov(hurst_, grid_.dt(), i - j);

    for (std::size_t j = 0; j < n; ++j) {
        double d = chol_[j * n + j];
        for (std::size_t k = 0; k < j; ++k) d -= chol_[j * n + k] * chol_[j * n + k];
        if (!(d > 0.0))
            throw NumericError("FbmSampler: increment covariance not positive definite");
        d = std::sqrt(d);
        chol_[j * n + j] = d;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = chol_[i * n + j];
            for (std::size_t k = 0; k < j; ++k) s -= chol_[i * n + k] * chol_[j * n + k];
            chol_[i * n + j] = s / d;
        }
    }
    method_ = "cholesky";
}

void FbmSampler::sample_path(std::uint64_t seed, std::uint32_t run, std::uint32_t mode,
                             double* path) const {
    std::size_t n = std::size_t(grid_.n_steps);
    GaussianSubstream stream(seed, run, mode);

    std::vector<double> increments(n);
    if (method_ == "circulant") {
        std::vector<double> z = stream.draw(m_);
        std::vector<std::complex<double>> freq(m_);
        freq[0] = amplitude_[0] * z[0];
        freq[m_ / 2] = amplitude_[m_ / 2] * z[1];
        for (std::size_t j = 1; j < m_ / 2; ++j) {
            std::complex<double> v(z[2 * j], z[2 * j + 1]);
            freq[j] = amplitude_[j] * v;
            freq[m_ - j] = amplitude_[j] * std::conj(v);
        }
        fft_->inverse(freq);
        for (std::size_t i = 0; i < n; ++i) increments[i] = freq[i].real();
    } else {
        std::vector<double> z = stream.draw(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j <= i; ++j) s += chol_[i * n + j] * z[j];
            increments[i] = s;
        }
    }

    path[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) path[i + 1] = path[i] + increments[i];
}

FbmPathSet sample_fbm_paths(const TimeGrid& grid, double hurst, int n_modes,
                            std::uint64_t seed, const FbmOptions& opts) {
    if (n_modes < 1) throw std::invalid_argument("sample_fbm_paths: n_modes must be >= 1");

    FbmSampler sampler(grid, hurst, opts.method);
    FbmPathSet out{grid, n_modes, sampler.method(),
                   std::vector<double>(std::size_t(n_modes) * grid.n_points())};

#pragma omp parallel for schedule(static)
    for (int k = 0; k < n_modes; ++k)
        sampler.sample_path(seed, opts.run, std::uint32_t(k),
                            out.paths.data() + std::size_t(k) * grid.n_points());
    return out;
}

}  // namespace spde
