#pragma once

#include <cstdint>
#include <vector>

#include "spde/fbm.hpp"
#include "spde/grid.hpp"
#include "spde/spectral_model.hpp"

namespace spde {

struct SimOptions {
    std::uint32_t run = 0;
    // Refinement factor between the internal integration grid and the
    // observation grid; 0 selects it per mode from the stiffness mu*dt.
    int oversample = 0;
};

struct ModeTrajectorySet {
    TimeGrid grid;                 // observation grid
    SpectralModel model;
    std::vector<double> values;    // n_modes rows x grid.n_points() cols
    std::vector<double> noise;     // driving fBm at the observation nodes, same shape
    std::vector<double> qvar;      // per-mode integral of x^2 dt on the integration grid
    std::vector<int> oversample;   // refinement factor actually used per mode

    int n_modes() const { return model.n_modes(); }
    const double* row(int k) const { return values.data() + std::size_t(k) * grid.n_points(); }
    const double* noise_row(int k) const {
        return noise.data() + std::size_t(k) * grid.n_points();
    }
};

// Integrates every mode x_k(t) = e^{-mu_k t} x_k(0) + B_k(t) - mu_k I_k(t)
// on an internally refined grid, observing at the nodes of `grid`.  The
// output is a pure function of (model, grid, seed, opts).
ModeTrajectorySet simulate_modes(const SpectralModel& model, const TimeGrid& grid,
                                 std::uint64_t seed, const SimOptions& opts = {});

// The driving paths that produced `traj`, restricted to the observation
// grid, packaged for residual_check.
FbmPathSet recorded_noise(const ModeTrajectorySet& traj);

// Quadrature diagnostic: per-mode max_i |x(t_i) - x(0) + mu * Trap(x, t_i)
// - B(t_i)| over the shared grid.
std::vector<double> residual_check(const ModeTrajectorySet& traj, const FbmPathSet& fbm,
                                   const SpectralModel& model);

struct FieldSnapshot {
    int time_index = 0;
    int dimension = 1;
    std::vector<double> xi;        // spatial points per axis
    std::vector<double> values;    // 1D: per point; 2D: row-major over (xi1, xi2)
};

// Sums x_k(t) e_k(xi) over the model's labelled basis (orthonormal sine
// basis, factor sqrt(2) per axis) at the requested time indices.
std::vector<FieldSnapshot> reconstruct_field(const ModeTrajectorySet& traj,
                                             int n_spatial_points,
                                             const std::vector<int>& time_indices);

namespace detail {

// One-step weights of the exponential convolution against a piecewise
// linear driver: I(t+h) = e^{-mu h} I(t) + a B(t) + b B(t+h).  Shared
// with the direct-summation reference so both use one discretization.
struct StepWeights {
    double decay, a, b;
};

StepWeights step_weights(double mu, double h);

}  // namespace detail

}  // namespace spde
