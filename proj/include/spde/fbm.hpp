#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "spde/fft.hpp"
#include "spde/grid.hpp"

namespace spde {

// Covariance 0.5*(t^{2H} + s^{2H} - |t-s|^{2H}) of fractional Brownian
// motion with Hurst index H.
double fbm_covariance(double s, double t, double hurst);

struct FbmOptions {
    enum class Method { kAuto, kCirculant, kCholesky };
    Method method = Method::kAuto;
    std::uint32_t run = 0;
};

struct FbmPathSet {
    TimeGrid grid;
    int n_modes;
    std::string method;         // "circulant" or "cholesky"
    std::vector<double> paths;  // row k holds B_k(t_0..t_n), B_k(0) = 0

    const double* row(int k) const { return paths.data() + std::size_t(k) * grid.n_points(); }
};

// Prepared exact sampler for one (grid, hurst) pair: the increment
// covariance is factored once, after which any number of independent
// paths can be drawn.  Sampling is const and thread-safe.
class FbmSampler {
public:
    FbmSampler(const TimeGrid& grid, double hurst,
               FbmOptions::Method method = FbmOptions::Method::kAuto);

    // Writes n_steps+1 values starting at B(0) = 0.  The path is a pure
    // function of (seed, run, mode) and the constructor arguments.
    void sample_path(std::uint64_t seed, std::uint32_t run, std::uint32_t mode,
                     double* path) const;

    const std::string& method() const { return method_; }
    const TimeGrid& grid() const { return grid_; }
    double hurst() const { return hurst_; }

private:
    TimeGrid grid_;
    double hurst_;
    std::string method_;

    // Circulant spectrum: amplitude_[j] = sqrt of the j-th eigenvalue times m
    // (halved off the real axis), ready to scale unit normals.
    std::size_t m_ = 0;
    std::vector<double> amplitude_;
    std::shared_ptr<const Radix2Fft> fft_;

    // Dense fallback: lower-triangular Cholesky factor of the increment
    // covariance, row-major packed.
    std::vector<double> chol_;

    void build_circulant();
    void build_cholesky();
};

// Draws n_modes independent fBm paths on the grid.  Mode k of run
// opts.run reads the substream addressed by (seed, run, k).
FbmPathSet sample_fbm_paths(const TimeGrid& grid, double hurst, int n_modes,
                            std::uint64_t seed, const FbmOptions& opts = {});

}  // namespace spde
