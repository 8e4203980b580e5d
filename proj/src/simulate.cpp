#include "spde/simulate.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>

#include "spde/errors.hpp"

namespace spde {

namespace {

// Accuracy targets for the internal grid: mu*dt is driven below theta
// before the recursion runs.  Rough paths need the tighter bound.
double stiffness_target(double hurst) { return hurst < 0.5 ? 0.03 : 0.25; }

constexpr int kMaxOversample = 1024;
constexpr long kMaxFineSteps = 1L << 22;

int pick_oversample(double mu, const TimeGrid& grid, double hurst) {
    double theta = stiffness_target(hurst);
    int r = 1;
    while (mu * grid.dt() / r > theta && r < kMaxOversample &&
           long(grid.n_steps) * r * 2 <= kMaxFineSteps)
        r <<= 1;
    return r;
}

}  // namespace

namespace detail {

// The series branch keeps a and b accurate when mu*h underflows the
// subtraction in the closed form.
StepWeights step_weights(double mu, double h) {
    double z = mu * h;
    StepWeights w;
    w.decay = std::exp(-z);
    if (z < 1e-2) {
        // a = h*(1/2 - z/3 + z^2/8 - z^3/30 + z^4/144)
        // b = h*(1/2 - z/6 + z^2/24 - z^3/120 + z^4/720)
        w.a = h * (0.5 + z * (-1.0 / 3 + z * (1.0 / 8 + z * (-1.0 / 30 + z / 144))));
        w.b = h * (0.5 + z * (-1.0 / 6 + z * (1.0 / 24 + z * (-1.0 / 120 + z / 720))));
        return w;
    }
    double em = -std::expm1(-z);                // 1 - e^{-z}
    w.b = h * (z - em) / (z * z);
    w.a = em / mu - w.b;
    return w;
}

}  // namespace detail

ModeTrajectorySet simulate_modes(const SpectralModel& model, const TimeGrid& grid,
                                 std::uint64_t seed, const SimOptions& opts) {
    model.validate();
    if (!model.lambda_true)
        throw std::invalid_argument("simulate_modes: lambda_true must be set");
    if (grid.n_steps < 2) throw std::invalid_argument("simulate_modes: n_steps must be >= 2");
    if (opts.oversample < 0 || opts.oversample > kMaxOversample)
        throw std::invalid_argument("simulate_modes: oversample out of range");
    if (opts.oversample > 0 && long(grid.n_steps) * opts.oversample > kMaxFineSteps)
        throw std::invalid_argument("simulate_modes: refined grid too large");

    int n_modes = model.n_modes();
    double lambda = *model.lambda_true;

    ModeTrajectorySet out{grid, model,
                          std::vector<double>(std::size_t(n_modes) * grid.n_points()),
                          std::vector<double>(std::size_t(n_modes) * grid.n_points()),
                          std::vector<double>(n_modes), std::vector<int>(n_modes)};

    for (int k = 0; k < n_modes; ++k) {
        double mu = model.mu(k, lambda);
        if (!(mu > 0.0)) throw std::invalid_argument("simulate_modes: mu_k must be positive");
        out.oversample[k] =
            opts.oversample > 0 ? opts.oversample : pick_oversample(mu, grid, model.hurst);
    }

    // Modes sharing a refinement factor share one factored sampler.
    std::map<int, std::shared_ptr<FbmSampler>> samplers;
    for (int k = 0; k < n_modes; ++k) {
        int r = out.oversample[k];
        if (!samplers.count(r))
            samplers[r] = std::make_shared<FbmSampler>(
                TimeGrid(grid.horizon, grid.n_steps * r), model.hurst);
    }

#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < n_modes; ++k) {
        int r = out.oversample[k];
        const FbmSampler& sampler = *samplers.at(r);
        long n_fine = long(grid.n_steps) * r;
        double h = grid.horizon / double(n_fine);
        double mu = model.mu(k, lambda);
        double x0 = model.initial[k];
        detail::StepWeights w = detail::step_weights(mu, h);

        std::vector<double> B(n_fine + 1);
        sampler.sample_path(seed, opts.run, std::uint32_t(k), B.data());

        double* xrow = out.values.data() + std::size_t(k) * grid.n_points();
        double* brow = out.noise.data() + std::size_t(k) * grid.n_points();
        xrow[0] = x0;
        brow[0] = 0.0;

        double conv = 0.0;    // running convolution integral I(t_i)
        double decay0 = 1.0;  // running e^{-mu t_i}
        double x_prev = x0;
        double qvar = 0.0;
        for (long i = 0; i < n_fine; ++i) {
            conv = w.decay * conv + w.a * B[i] + w.b * B[i + 1];
            decay0 *= w.decay;
            double x = decay0 * x0 + B[i + 1] - mu * conv;
            qvar += 0.5 * h * (x_prev * x_prev + x * x);
            x_prev = x;
            if ((i + 1) % r == 0) {
                long obs = (i + 1) / r;
                xrow[obs] = x;
                brow[obs] = B[i + 1];
            }
        }
        out.qvar[k] = qvar;
    }
    return out;
}

FbmPathSet recorded_noise(const ModeTrajectorySet& traj) {
    return FbmPathSet{traj.grid, traj.n_modes(), "recorded", traj.noise};
}

std::vector<double> residual_check(const ModeTrajectorySet& traj, const FbmPathSet& fbm,
                                   const SpectralModel& model) {
    if (fbm.grid.n_steps != traj.grid.n_steps || fbm.n_modes < traj.n_modes())
        throw std::invalid_argument("residual_check: grid or mode mismatch");
    if (!model.lambda_true)
        throw std::invalid_argument("residual_check: lambda_true must be set");

    int n = traj.grid.n_points();
    double dt = traj.grid.dt();
    std::vector<double> out(traj.n_modes());
    for (int k = 0; k < traj.n_modes(); ++k) {
        const double* x = traj.row(k);
        const double* B = fbm.row(k);
        double mu = model.mu(k, *model.lambda_true);
        double integral = 0.0;
        double worst = 0.0;
        for (int i = 1; i < n; ++i) {
            integral += 0.5 * dt * (x[i - 1] + x[i]);
            worst = std::max(worst, std::fabs(x[i] - x[0] + mu * integral - B[i]));
        }
        out[k] = worst;
    }
    return out;
}

std::vector<FieldSnapshot> reconstruct_field(const ModeTrajectorySet& traj,
                                             int n_spatial_points,
                                             const std::vector<int>& time_indices) {
    const SpectralModel& model = traj.model;
    if (model.labels.empty())
        throw std::invalid_argument("reconstruct_field: basis labels absent (raw model)");
    if (n_spatial_points < 2)
        throw std::invalid_argument("reconstruct_field: need at least 2 spatial points");

    constexpr double kPi = 3.14159265358979323846264338328;
    const double root2 = std::sqrt(2.0);

    std::vector<double> xi(n_spatial_points);
    for (int j = 0; j < n_spatial_points; ++j)
        xi[j] = double(j) / double(n_spatial_points - 1);

    std::vector<FieldSnapshot> out;
    for (int idx : time_indices) {
        if (idx < 0 || idx >= traj.grid.n_points())
            throw std::invalid_argument("reconstruct_field: time index out of range");
        FieldSnapshot snap;
        snap.time_index = idx;
        snap.dimension = model.dimension;
        snap.xi = xi;
        if (model.dimension == 1) {
            snap.values.assign(xi.size(), 0.0);
            for (int k = 0; k < traj.n_modes(); ++k) {
                double xk = traj.row(k)[idx];
                int k1 = model.labels[k].k1;
                for (std::size_t j = 0; j < xi.size(); ++j)
                    snap.values[j] += xk * root2 * std::sin(k1 * kPi * xi[j]);
            }
        } else {
            std::size_t p = xi.size();
            snap.values.assign(p * p, 0.0);
            for (int k = 0; k < traj.n_modes(); ++k) {
                double xk = traj.row(k)[idx];
                int k1 = model.labels[k].k1, k2 = model.labels[k].k2;
                for (std::size_t j1 = 0; j1 < p; ++j1) {
                    double s1 = std::sin(k1 * kPi * xi[j1]);
                    for (std::size_t j2 = 0; j2 < p; ++j2)
                        snap.values[j1 * p + j2] +=
                            xk * 2.0 * s1 * std::sin(k2 * kPi * xi[j2]);
                }
            }
        }
        out.push_back(std::move(snap));
    }
    return out;
}

}  // namespace spde
