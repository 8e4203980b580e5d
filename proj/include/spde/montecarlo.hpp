#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spde/estimator.hpp"
#include "spde/grid.hpp"
#include "spde/spectral_model.hpp"
#include "spde/stats_util.hpp"

namespace spde {

struct McConfig {
    SpectralModel model;          // needs lambda_true and >= max(n_list) modes
    int n_steps = 2048;
    std::vector<int> n_list;      // strictly increasing mode counts
    int runs = 2;
    std::uint64_t seed = 0;
    bool pathwise = true;
    bool theoretical = true;
    int burn_in = 8;              // smallest N entering the rate fit
    int threads = 0;              // 0 = runtime default
    int oversample = 0;           // forwarded to simulate_modes
};

struct McEstimateRecord {
    int run = 0;
    int n_modes = 0;
    std::string estimator;        // "pathwise" or "theoretical"
    double value = 0.0;
    std::string case_tag;         // "-" for the theoretical estimator
};

struct McCell {
    int n_modes = 0;
    std::string estimator;
    double bias = 0.0;
    double rmse = 0.0;
    std::array<double, 5> quantiles{};   // 5, 25, 50, 75, 95 percent
    int failures = 0;
    int used = 0;                        // runs entering the moments
};

struct RateRow {
    std::string estimator;
    bool fitted = false;
    double slope = 0.0;
    double stderr_slope = 0.0;
    double intercept = 0.0;
    bool rho_known = false;
    double theoretical_rho = 0.0;
    bool log_factor = false;
};

struct RatioSummary {
    double mean = 0.0;
    double median = 0.0;
    int used = 0;
    int excluded = 0;
};

struct QqPoint {
    double normal_q = 0.0;
    double sample_q = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

struct McReport {
    std::vector<int> n_list;
    double lambda_true = 0.0;
    std::vector<McEstimateRecord> estimates;  // run-major, deterministic order
    std::vector<McCell> cells;
    std::vector<RateRow> rates;
    std::optional<RatioSummary> ratio;
    std::vector<QqPoint> qq;                  // pathwise sample at max N
};

// Runs the full experiment: one simulation per run at max(n_list) modes,
// estimators applied to every prefix in n_list.  The report is a pure
// function of cfg; thread count changes nothing but wall time.
McReport run_mc(const McConfig& cfg);

// log RMSE vs log N regression for one estimator over cells with
// n_modes >= burn_in; needs >= 3 usable cells.
LinearFit rmse_slope(const McReport& report, const std::string& estimator, int burn_in = 8);

// Per-run |lambda - theoretical| / |lambda - pathwise| at the largest N.
RatioSummary error_ratio_2h(const McReport& report);

// Standardized order statistics against normal plotting positions with a
// 95 percent order-statistic envelope.
std::vector<QqPoint> qq_normal(std::vector<double> sample);

// estimates.csv, summary.csv, rate.csv, qq.csv under out_dir.
void write_mc_csvs(const McReport& report, const std::string& out_dir);

namespace detail {

// Building blocks shared by run_mc and the serial reference.  One run
// fills exactly n_list.size() * n_estimators consecutive slots.
void mc_validate(const McConfig& cfg);
int mc_slots_per_run(const McConfig& cfg);
void mc_single_run(const McConfig& cfg, const TimeGrid& grid, int run, McEstimateRecord* out);
McReport mc_aggregate(const McConfig& cfg, std::vector<McEstimateRecord> estimates);

}  // namespace detail

}  // namespace spde
