#include "spde/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "spde/csv.hpp"
#include "spde/errors.hpp"
#include "spde/simulate.hpp"

namespace spde {

namespace {

std::vector<std::string> estimator_names(const McConfig& cfg) {
    std::vector<std::string> out;
    if (cfg.pathwise) out.push_back("pathwise");
    if (cfg.theoretical) out.push_back("theoretical");
    return out;
}

McCell aggregate_cell(int n_modes, const std::string& estimator,
                      const std::vector<McEstimateRecord>& records, double lambda) {
    McCell cell;
    cell.n_modes = n_modes;
    cell.estimator = estimator;

    std::vector<double> values;
    for (const auto& rec : records) {
        if (rec.n_modes != n_modes || rec.estimator != estimator) continue;
        if (rec.case_tag == "none") {
            ++cell.failures;
            continue;
        }
        values.push_back(rec.value);
    }
    cell.used = int(values.size());
    if (values.empty()) {
        cell.bias = cell.rmse = std::nan("");
        cell.quantiles.fill(std::nan(""));
        return cell;
    }

    double mean = 0.0, msq = 0.0;
    for (double v : values) {
        mean += v;
        msq += (v - lambda) * (v - lambda);
    }
    mean /= double(values.size());
    cell.bias = mean - lambda;
    cell.rmse = std::sqrt(msq / double(values.size()));

    std::sort(values.begin(), values.end());
    const double probs[5] = {0.05, 0.25, 0.5, 0.75, 0.95};
    for (int i = 0; i < 5; ++i) cell.quantiles[i] = quantile_sorted(values, probs[i]);
    return cell;
}

}  // namespace

namespace detail {

void mc_validate(const McConfig& cfg) {
    cfg.model.validate();
    if (!cfg.model.lambda_true) throw std::invalid_argument("mc: lambda_true must be set");
    if (cfg.runs < 2) throw std::invalid_argument("mc: runs must be >= 2");
    if (cfg.n_list.empty()) throw std::invalid_argument("mc: n_list must be non-empty");
    for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
        if (cfg.n_list[i] < 1) throw std::invalid_argument("mc: n_list entries must be >= 1");
        if (i && cfg.n_list[i] <= cfg.n_list[i - 1])
            throw std::invalid_argument("mc: n_list must be strictly increasing");
    }
    if (cfg.n_list.back() > cfg.model.n_modes())
        throw std::invalid_argument("mc: n_list exceeds the model's mode count");
    if (!cfg.pathwise && !cfg.theoretical)
        throw std::invalid_argument("mc: estimator set must be non-empty");
    if (cfg.model.growth) {
        ExistenceResult ex = check_existence(*cfg.model.growth);
        if (!ex.ok) throw std::invalid_argument("mc: model fails the existence check");
    }
}

int mc_slots_per_run(const McConfig& cfg) {
    return int(cfg.n_list.size()) * (int(cfg.pathwise) + int(cfg.theoretical));
}

void mc_single_run(const McConfig& cfg, const TimeGrid& grid, int run, McEstimateRecord* out) {
    int n_max = cfg.n_list.back();
    SpectralModel model = cfg.model;
    if (model.n_modes() > n_max) {
        model.alpha.resize(n_max);
        model.beta.resize(n_max);
        model.initial.resize(n_max);
        if (!model.labels.empty()) model.labels.resize(n_max);
    }

    SimOptions sim_opts;
    sim_opts.run = std::uint32_t(run);
    sim_opts.oversample = cfg.oversample;
    ModeTrajectorySet traj = simulate_modes(model, grid, cfg.seed, sim_opts);
    SufficientStats full = compute_stats(traj, model);

    double lambda = *cfg.model.lambda_true;
    for (int n : cfg.n_list) {
        SufficientStats stats = prefix_stats(full, n);
        if (cfg.pathwise) {
            McEstimateRecord rec;
            rec.run = run;
            rec.n_modes = n;
            rec.estimator = "pathwise";
            try {
                EstimateResult res = pathwise_lse(stats);
                rec.value = res.value;
                rec.case_tag = to_string(res.case_tag);
            } catch (const std::exception&) {
                // Solver failure surfaces as a counted failure.
                rec.value = 0.0;
                rec.case_tag = "none";
            }
            *out++ = std::move(rec);
        }
        if (cfg.theoretical) {
            McEstimateRecord rec;
            rec.run = run;
            rec.n_modes = n;
            rec.estimator = "theoretical";
            rec.value = theoretical_lse(stats, lambda);
            rec.case_tag = "-";
            *out++ = std::move(rec);
        }
    }
}

McReport mc_aggregate(const McConfig& cfg, std::vector<McEstimateRecord> estimates) {
    double lambda = *cfg.model.lambda_true;
    std::vector<std::string> estimators = estimator_names(cfg);

    McReport report;
    report.n_list = cfg.n_list;
    report.lambda_true = lambda;
    report.estimates = std::move(estimates);

    for (int n : cfg.n_list)
        for (const std::string& est : estimators)
            report.cells.push_back(aggregate_cell(n, est, report.estimates, lambda));

    for (const std::string& est : estimators) {
        RateRow row;
        row.estimator = est;
        try {
            LinearFit fit = rmse_slope(report, est, cfg.burn_in);
            row.fitted = true;
            row.slope = fit.slope;
            row.stderr_slope = fit.slope_stderr;
            row.intercept = fit.intercept;
        } catch (const std::exception&) {
            row.fitted = false;
        }
        if (cfg.model.growth) {
            row.rho_known = true;
            RateSpec rate = theoretical_rate(*cfg.model.growth, cfg.model.hurst);
            row.theoretical_rho = rate.exponent;
            row.log_factor = rate.log_factor;
        }
        report.rates.push_back(std::move(row));
    }

    if (cfg.pathwise && cfg.theoretical) report.ratio = error_ratio_2h(report);

    // Q-Q data from the pathwise sample at the largest N when well posed.
    if (cfg.pathwise) {
        int n_max = cfg.n_list.back();
        std::vector<double> sample;
        for (const auto& rec : report.estimates)
            if (rec.n_modes == n_max && rec.estimator == "pathwise" && rec.case_tag != "none")
                sample.push_back(rec.value);
        if (sample.size() >= 20) {
            try {
                report.qq = qq_normal(std::move(sample));
            } catch (const std::exception&) {
                report.qq.clear();  // degenerate sample: leave empty
            }
        }
    }
    return report;
}

}  // namespace detail

McReport run_mc(const McConfig& cfg) {
    detail::mc_validate(cfg);

    TimeGrid grid(cfg.model.horizon, cfg.n_steps);
    int per_run = detail::mc_slots_per_run(cfg);

    // Fixed slot layout keeps the report independent of scheduling.
    std::vector<McEstimateRecord> estimates(std::size_t(cfg.runs) * per_run);

    int threads = cfg.threads;
#ifdef _OPENMP
    if (threads <= 0) threads = omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#else
    (void)threads;
#endif
    for (int run = 0; run < cfg.runs; ++run)
        detail::mc_single_run(cfg, grid, run, estimates.data() + std::size_t(run) * per_run);

    return detail::mc_aggregate(cfg, std::move(estimates));
}

LinearFit rmse_slope(const McReport& report, const std::string& estimator, int burn_in) {
    std::vector<double> log_n, log_rmse;
    for (const auto& cell : report.cells) {
        if (cell.estimator != estimator || cell.n_modes < burn_in) continue;
        if (cell.used == 0 || !(cell.rmse > 0.0)) continue;
        log_n.push_back(std::log(double(cell.n_modes)));
        log_rmse.push_back(std::log(cell.rmse));
    }
    if (log_n.size() < 3)
        throw std::invalid_argument("rmse_slope: fewer than 3 usable mode counts");
    return ols_fit(log_n, log_rmse);
}

RatioSummary error_ratio_2h(const McReport& report) {
    int n_max = report.n_list.back();
    double lambda = report.lambda_true;

    // Pair the two estimators per run at n_max.
    std::vector<double> path_err, theo_err;
    std::vector<bool> path_ok;
    for (const auto& rec : report.estimates) {
        if (rec.n_modes != n_max) continue;
        if (rec.estimator == "pathwise") {
            path_err.push_back(std::fabs(lambda - rec.value));
            path_ok.push_back(rec.case_tag != "none");
        } else if (rec.estimator == "theoretical") {
            theo_err.push_back(std::fabs(lambda - rec.value));
        }
    }
    if (path_err.empty() || path_err.size() != theo_err.size())
        throw std::invalid_argument("error_ratio_2h: both estimators must be enabled");

    RatioSummary summary;
    std::vector<double> ratios;
    for (std::size_t i = 0; i < path_err.size(); ++i) {
        if (!path_ok[i] || !(path_err[i] > 0.0) || !(theo_err[i] > 0.0)) {
            ++summary.excluded;
            continue;
        }
        ratios.push_back(theo_err[i] / path_err[i]);
    }
    summary.used = int(ratios.size());
    if (!ratios.empty()) {
        double mean = 0.0;
        for (double r : ratios) mean += r;
        summary.mean = mean / double(ratios.size());
        std::sort(ratios.begin(), ratios.end());
        summary.median = quantile_sorted(ratios, 0.5);
    }
    return summary;
}

std::vector<QqPoint> qq_normal(std::vector<double> sample) {
    if (sample.size() < 20) throw std::invalid_argument("qq_normal: need >= 20 values");
    std::size_t n = sample.size();

    double mean = 0.0;
    for (double v : sample) mean += v;
    mean /= double(n);
    double var = 0.0;
    for (double v : sample) var += (v - mean) * (v - mean);
    var /= double(n - 1);
    if (!(var > 0.0)) throw std::invalid_argument("qq_normal: degenerate sample (zero variance)");
    double sd = std::sqrt(var);

    std::sort(sample.begin(), sample.end());
    std::vector<QqPoint> out(n);
    for (std::size_t i = 1; i <= n; ++i) {
        QqPoint& pt = out[i - 1];
        pt.sample_q = (sample[i - 1] - mean) / sd;
        pt.normal_q = normal_quantile((double(i) - 0.5) / double(n));
        // The i-th order statistic of n uniforms is Beta(i, n+1-i).
        double a = double(i), b = double(n + 1 - i);
        pt.lo = normal_quantile(incomplete_beta_inverse(a, b, 0.025));
        pt.hi = normal_quantile(incomplete_beta_inverse(a, b, 0.975));
    }
    return out;
}

void write_mc_csvs(const McReport& report, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw ConfigError("out", "cannot create directory " + out_dir);

    std::vector<std::vector<std::string>> rows;
    for (const auto& rec : report.estimates)
        rows.push_back({std::to_string(rec.run), std::to_string(rec.n_modes), rec.estimator,
                        csv::format(rec.value), rec.case_tag});
    csv::write_file(out_dir + "/estimates.csv", "run,N,estimator,value,case", rows);

    rows.clear();
    for (const auto& cell : report.cells)
        rows.push_back({std::to_string(cell.n_modes), cell.estimator, csv::format(cell.bias),
                        csv::format(cell.rmse), csv::format(cell.quantiles[0]),
                        csv::format(cell.quantiles[1]), csv::format(cell.quantiles[2]),
                        csv::format(cell.quantiles[3]), csv::format(cell.quantiles[4]),
                        std::to_string(cell.failures)});
    csv::write_file(out_dir + "/summary.csv",
                    "N,estimator,bias,rmse,q05,q25,q50,q75,q95,failures", rows);

    rows.clear();
    for (const auto& rate : report.rates)
        rows.push_back({rate.estimator, csv::format(rate.fitted ? rate.slope : std::nan("")),
                        csv::format(rate.fitted ? rate.stderr_slope : std::nan("")),
                        csv::format(rate.rho_known ? rate.theoretical_rho : std::nan("")),
                        rate.log_factor ? "true" : "false"});
    csv::write_file(out_dir + "/rate.csv", "estimator,slope,stderr,theoretical_rho,log_factor",
                    rows);

    rows.clear();
    for (const auto& pt : report.qq)
        rows.push_back({csv::format(pt.normal_q), csv::format(pt.sample_q), csv::format(pt.lo),
                        csv::format(pt.hi)});
    csv::write_file(out_dir + "/qq.csv", "normal_q,sample_q,lo,hi", rows);
}

}  // namespace spde
