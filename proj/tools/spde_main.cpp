#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spde/config.hpp"
#include "spde/csv.hpp"
#include "spde/errors.hpp"
#include "spde/estimator.hpp"
#include "spde/montecarlo.hpp"
#include "spde/simulate.hpp"
#include "spde/special_functions.hpp"

namespace {

using namespace spde;

struct CommonOpts {
    std::string config;
    std::string out;
    int threads = 0;
    std::uint64_t seed = 0;
    CLI::Option* out_opt = nullptr;
    CLI::Option* threads_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
};

void add_common(CLI::App* sub, CommonOpts& o) {
    sub->add_option("--config", o.config, "key=value config file")->required();
    o.out_opt = sub->add_option("--out", o.out, "output directory (overrides out_dir)");
    o.threads_opt = sub->add_option("--threads", o.threads, "worker threads (overrides config)");
    o.seed_opt = sub->add_option("--seed", o.seed, "master seed (overrides config)");
}

RunConfig load_with_overrides(const CommonOpts& o) {
    RunConfig cfg = load_run_config(o.config);
    if (o.out_opt->count()) cfg.out_dir = o.out;
    if (o.threads_opt->count()) cfg.threads = o.threads;
    if (o.seed_opt->count()) cfg.seed = o.seed;
    return cfg;
}

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("out", "cannot create directory " + dir);
}

int cmd_simulate(const RunConfig& cfg) {
    TimeGrid grid(cfg.model.horizon, cfg.n_steps);
    SimOptions opts;
    opts.oversample = cfg.oversample;
    ModeTrajectorySet traj = simulate_modes(cfg.model, grid, cfg.seed, opts);

    ensure_out_dir(cfg.out_dir);
    std::string header = "t";
    for (int k = 1; k <= traj.n_modes(); ++k) header += ",x" + std::to_string(k);
    std::vector<std::vector<std::string>> rows(grid.n_points());
    for (int i = 0; i < grid.n_points(); ++i) {
        rows[i].push_back(csv::format(grid.t(i)));
        for (int k = 0; k < traj.n_modes(); ++k) rows[i].push_back(csv::format(traj.row(k)[i]));
    }
    std::string traj_path = cfg.out_dir + "/trajectory.csv";
    csv::write_file(traj_path, header, rows);
    std::printf("wrote %s (%d modes, %d steps)\n", traj_path.c_str(), traj.n_modes(),
                grid.n_steps);

    if (!cfg.field_times.empty()) {
        auto snaps = reconstruct_field(traj, cfg.field_points, cfg.field_times);
        for (const auto& snap : snaps) {
            std::vector<std::vector<std::string>> frows;
            if (snap.dimension == 1) {
                for (std::size_t j = 0; j < snap.xi.size(); ++j)
                    frows.push_back({csv::format(snap.xi[j]), csv::format(snap.values[j])});
            } else {
                std::size_t p = snap.xi.size();
                for (std::size_t j1 = 0; j1 < p; ++j1)
                    for (std::size_t j2 = 0; j2 < p; ++j2)
                        frows.push_back({csv::format(snap.xi[j1]), csv::format(snap.xi[j2]),
                                         csv::format(snap.values[j1 * p + j2])});
            }
            std::string path =
                cfg.out_dir + "/field_t" + std::to_string(snap.time_index) + ".csv";
            csv::write_file(path, snap.dimension == 1 ? "xi,u" : "xi1,xi2,u", frows);
            std::printf("wrote %s\n", path.c_str());
        }
    }
    return 0;
}

int cmd_estimate(const RunConfig& cfg, const std::string& traj_path) {
    csv::Table tab = csv::read_numeric(traj_path);
    if (tab.n_cols() < 2)
        throw ConfigError("traj", "need a time column and at least one mode column");
    if (tab.rows.size() < 3) throw ConfigError("traj", "need at least 3 rows");

    int n_steps = int(tab.rows.size()) - 1;
    double horizon = cfg.model.horizon;
    double dt = horizon / n_steps;
    for (int i = 0; i <= n_steps; ++i)
        if (std::fabs(tab.rows[i][0] - i * dt) > 1e-9 * std::max(1.0, horizon))
            throw ConfigError("traj",
                              "time column is not the uniform grid of the config horizon");

    int n_file_modes = int(tab.n_cols()) - 1;
    if (cfg.model.n_modes() < n_file_modes)
        throw ConfigError("traj", "file has more modes than the configured model");
    SpectralModel model = cfg.model;
    model.alpha.resize(n_file_modes);
    model.beta.resize(n_file_modes);
    model.initial.resize(n_file_modes);
    if (!model.labels.empty()) model.labels.resize(n_file_modes);

    TimeGrid grid(horizon, n_steps);
    ModeTrajectorySet traj{grid, model,
                           std::vector<double>(std::size_t(n_file_modes) * grid.n_points()),
                           {}, {}, {}};
    for (int k = 0; k < n_file_modes; ++k)
        for (int i = 0; i <= n_steps; ++i)
            traj.values[std::size_t(k) * grid.n_points() + i] = tab.rows[i][k + 1];

    bool nonzero_ic = false;
    for (int k = 0; k < n_file_modes; ++k)
        if (tab.rows[0][k + 1] != 0.0) nonzero_ic = true;

    SufficientStats stats = compute_stats(traj, model);
    EstimateResult res = pathwise_lse(stats);
    std::printf("value=%.17g case=%s iterations=%d residual=%.17g r_at_zero=%.17g",
                res.value, to_string(res.case_tag), res.iterations, res.residual,
                res.r_at_zero);
    if (model.lambda_true)
        std::printf(" theoretical=%.17g", theoretical_lse(stats, *model.lambda_true));
    std::printf(" nonzero_ic=%s\n", nonzero_ic ? "true" : "false");
    return 0;
}

int cmd_mc(const RunConfig& cfg) {
    McConfig mc;
    mc.model = cfg.model;
    mc.n_steps = cfg.n_steps;
    mc.n_list = cfg.n_list;
    mc.runs = cfg.runs;
    mc.seed = cfg.seed;
    mc.pathwise = cfg.est_pathwise;
    mc.theoretical = cfg.est_theoretical;
    mc.burn_in = cfg.burn_in;
    mc.threads = cfg.threads;
    mc.oversample = cfg.oversample;

    McReport report = run_mc(mc);
    write_mc_csvs(report, cfg.out_dir);

    for (const auto& cell : report.cells)
        std::printf("N=%d estimator=%s median=%.6g rmse=%.6g failures=%d\n", cell.n_modes,
                    cell.estimator.c_str(), cell.quantiles[2], cell.rmse, cell.failures);
    for (const auto& rate : report.rates) {
        std::printf("rate estimator=%s slope=%.6g stderr=%.6g", rate.estimator.c_str(),
                    rate.fitted ? rate.slope : std::nan(""),
                    rate.fitted ? rate.stderr_slope : std::nan(""));
        std::printf(" theoretical_rho=%.6g log_factor=%s\n",
                    rate.rho_known ? rate.theoretical_rho : std::nan(""),
                    rate.log_factor ? "true" : "false");
    }
    if (report.ratio)
        std::printf("ratio mean=%.6g median=%.6g used=%d excluded=%d\n", report.ratio->mean,
                    report.ratio->median, report.ratio->used, report.ratio->excluded);
    std::printf("wrote %s/{estimates,summary,rate,qq}.csv\n", cfg.out_dir.c_str());
    return 0;
}

int cmd_check(const RunConfig& cfg) {
    ConditionReport rep = check_consistency(cfg.model);
    RateSpec rate = theoretical_rate(cfg.model);
    std::printf("existence=%s\n", rep.existence_ok ? "true" : "false");
    std::printf("gamma=%.17g\n", rep.gamma_witness);
    std::printf("consistent=%s\n", rep.theoretical_lse_consistent ? "true" : "false");
    std::printf("clause=%s\n", rep.clause.c_str());
    std::printf("pathwise_extra=%s\n", rep.pathwise_extra_ok ? "true" : "false");
    std::printf("c_limit=%.17g\n", rep.c_limit);
    std::printf("rate=%.17g\n", rate.exponent);
    std::printf("log_factor=%s\n", rate.log_factor ? "true" : "false");
    std::printf("notes=%s\n", rep.notes.c_str());
    return 0;
}

int cmd_delta(double mu, double hurst, double horizon) {
    double d = compensation_delta(mu, hurst, horizon);
    double dp = delta_prime(mu, hurst, horizon);
    double ds = delta_second(mu, hurst, horizon);
    std::printf("%.17g %.17g %.17g\n", d, dp, ds);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Drift estimation for spectral stochastic PDE models driven by "
                 "fractional noise"};
    app.require_subcommand(1);

    CommonOpts sim_opts, est_opts, mc_opts, check_opts;
    std::string traj_path;
    double mu = 0.0, hurst = 0.0, horizon = 1.0;

    CLI::App* sim = app.add_subcommand("simulate", "integrate mode trajectories to CSV");
    add_common(sim, sim_opts);
    CLI::App* est = app.add_subcommand("estimate", "drift estimate from a trajectory CSV");
    add_common(est, est_opts);
    est->add_option("--traj", traj_path, "trajectory CSV from simulate")->required();
    CLI::App* mc = app.add_subcommand("mc", "Monte Carlo study across mode counts");
    add_common(mc, mc_opts);
    CLI::App* check = app.add_subcommand("check", "existence and consistency report");
    add_common(check, check_opts);
    CLI::App* delta = app.add_subcommand("delta", "compensation term and derivatives");
    delta->add_option("--mu", mu, "drift coefficient")->required();
    delta->add_option("--hurst", hurst, "Hurst index in (0,1)")->required();
    delta->add_option("--horizon", horizon, "observation horizon T");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (sim->parsed()) return cmd_simulate(load_with_overrides(sim_opts));
        if (est->parsed()) return cmd_estimate(load_with_overrides(est_opts), traj_path);
        if (mc->parsed()) return cmd_mc(load_with_overrides(mc_opts));
        if (check->parsed()) return cmd_check(load_with_overrides(check_opts));
        if (delta->parsed()) return cmd_delta(mu, hurst, horizon);
    } catch (const NumericError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
