#include "spde/reference.hpp"

#include <cmath>
#include <stdexcept>

#include "spde/simulate.hpp"

namespace spde::reference {

std::vector<double> fou_path_direct(double mu, double x0, const TimeGrid& grid,
                                    const std::vector<double>& noise) {
    if (!(mu > 0.0)) throw std::invalid_argument("fou_path_direct: mu must be positive");
    if (int(noise.size()) != grid.n_points())
        throw std::invalid_argument("fou_path_direct: noise length mismatch");

    double h = grid.dt();
    detail::StepWeights w = detail::step_weights(mu, h);

    std::vector<double> x(grid.n_points());
    x[0] = x0;
    for (int i = 1; i < grid.n_points(); ++i) {
        double conv = 0.0;
        for (int j = 0; j < i; ++j)
            conv += std::exp(-mu * h * double(i - 1 - j)) *
                    (w.a * noise[j] + w.b * noise[j + 1]);
        x[i] = std::exp(-mu * grid.t(i)) * x0 + noise[i] - mu * conv;
    }
    return x;
}

FbmPathSet sample_fbm_paths_serial(const TimeGrid& grid, double hurst, int n_modes,
                                   std::uint64_t seed, const FbmOptions& opts) {
    if (n_modes < 1)
        throw std::invalid_argument("sample_fbm_paths_serial: n_modes must be >= 1");
    FbmSampler sampler(grid, hurst, opts.method);
    FbmPathSet out{grid, n_modes, sampler.method(),
                   std::vector<double>(std::size_t(n_modes) * grid.n_points())};
    for (int k = 0; k < n_modes; ++k)
        sampler.sample_path(seed, opts.run, std::uint32_t(k),
                            out.paths.data() + std::size_t(k) * grid.n_points());
    return out;
}

McReport run_mc_serial(const McConfig& cfg) {
    detail::mc_validate(cfg);
    TimeGrid grid(cfg.model.horizon, cfg.n_steps);
    int per_run = detail::mc_slots_per_run(cfg);
    std::vector<McEstimateRecord> estimates(std::size_t(cfg.runs) * per_run);
    for (int run = 0; run < cfg.runs; ++run)
        detail::mc_single_run(cfg, grid, run, estimates.data() + std::size_t(run) * per_run);
    return detail::mc_aggregate(cfg, std::move(estimates));
}

}  // namespace spde::reference
