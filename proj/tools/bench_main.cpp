#include <chrono>
#include <cmath>
#include <cstdio>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "spde/fbm.hpp"
#include "spde/montecarlo.hpp"
#include "spde/reference.hpp"
#include "spde/simulate.hpp"
#include "spde/spectral_model.hpp"

namespace {

using namespace spde;

template <class F>
auto timed(double& secs, F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    auto result = std::forward<F>(f)();
    auto t1 = std::chrono::steady_clock::now();
    secs = std::chrono::duration<double>(t1 - t0).count();
    return result;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i)
        worst = std::max(worst, std::fabs(a[i] - b[i]));
    return worst;
}

void bench_fbm() {
    TimeGrid grid(1.0, 4096);
    const int n_modes = 64;

    double t_serial = 0.0, t_parallel = 0.0, t_chol = 0.0;
    FbmPathSet serial = timed(t_serial, [&] {
        return reference::sample_fbm_paths_serial(grid, 0.3, n_modes, 7);
    });
    FbmPathSet parallel =
        timed(t_parallel, [&] { return sample_fbm_paths(grid, 0.3, n_modes, 7); });

    TimeGrid small(1.0, 1024);
    FbmOptions copts;
    copts.method = FbmOptions::Method::kCholesky;
    FbmPathSet chol = timed(t_chol, [&] {
        return reference::sample_fbm_paths_serial(small, 0.3, 4, 7, copts);
    });
    (void)chol;

    std::printf("fbm circulant  %5d paths x %5d steps  serial %8.3fs  parallel %8.3fs"
                "  max|diff| %.3g\n",
                n_modes, grid.n_steps, t_serial, t_parallel,
                max_abs_diff(serial.paths, parallel.paths));
    std::printf("fbm cholesky   %5d paths x %5d steps  factor+sample %8.3fs\n", 4,
                small.n_steps, t_chol);
}

void bench_recursion() {
    TimeGrid grid(1.0, 2048);
    SpectralModel model = heat1d(1, 1.0, 0.0, 0.3, 1.0);
    double mu = model.mu(0, 1.0);

    SimOptions opts;
    opts.oversample = 1;
    double t_rec = 0.0, t_dir = 0.0;
    ModeTrajectorySet traj = timed(t_rec, [&] { return simulate_modes(model, grid, 7, opts); });

    std::vector<double> noise(traj.noise_row(0), traj.noise_row(0) + grid.n_points());
    std::vector<double> direct =
        timed(t_dir, [&] { return reference::fou_path_direct(mu, 0.0, grid, noise); });

    std::vector<double> rec(traj.row(0), traj.row(0) + grid.n_points());
    std::printf("mode path      %5d steps, mu %.1f        recursion %7.3fs  direct %9.3fs"
                "  max|diff| %.3g\n",
                grid.n_steps, mu, t_rec, t_dir, max_abs_diff(rec, direct));
}

void bench_mc() {
    McConfig cfg;
    cfg.model = heat1d(8, 1.0, 0.0, 0.3, 1.0);
    cfg.n_steps = 256;
    cfg.n_list = {4, 8};
    cfg.runs = 8;
    cfg.seed = 7;
    cfg.burn_in = 0;

    double t_serial = 0.0, t_parallel = 0.0;
    McReport serial = timed(t_serial, [&] { return reference::run_mc_serial(cfg); });
    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    cfg.threads = threads;
    McReport parallel = timed(t_parallel, [&] { return run_mc(cfg); });

    double worst = 0.0;
    for (std::size_t i = 0; i < serial.estimates.size(); ++i)
        worst = std::max(worst,
                         std::fabs(serial.estimates[i].value - parallel.estimates[i].value));
    std::printf("mc harness     %5d runs x %d mode sets   serial %8.3fs  %d threads %7.3fs"
                "  max|diff| %.3g\n",
                cfg.runs, int(cfg.n_list.size()), t_serial, threads, t_parallel, worst);
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP disabled, single thread\n");
#endif
    bench_fbm();
    bench_recursion();
    bench_mc();
    return 0;
}
