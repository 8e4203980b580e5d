#include "spde/spectral_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace spde {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;

void require_growth(const GrowthSpec& g) {
    if (g.m1 < 0 || g.m2 < 0) throw std::invalid_argument("GrowthSpec: m1, m2 must be >= 0");
    if (g.d < 1) throw std::invalid_argument("GrowthSpec: d must be >= 1");
}

void require_scalars(double lambda1, double lambda2, double hurst, double horizon) {
    if (!(lambda1 > 0.0) || !std::isfinite(lambda1))
        throw std::invalid_argument("lambda1 must be positive and finite");
    if (!(lambda2 >= 0.0) || !std::isfinite(lambda2))
        throw std::invalid_argument("lambda2 must be non-negative and finite");
    if (!(hurst > 0.0 && hurst < 1.0)) throw std::invalid_argument("hurst must lie in (0,1)");
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("horizon must be positive and finite");
}

std::vector<double> pad_initial(std::vector<double> initial, std::size_t n) {
    if (initial.size() > n)
        throw std::invalid_argument("initial: more entries than modes");
    for (double v : initial)
        if (!std::isfinite(v)) throw std::invalid_argument("initial: entries must be finite");
    initial.resize(n, 0.0);
    return initial;
}

}  // namespace

void SpectralModel::validate() const {
    if (alpha.empty()) throw std::invalid_argument("model: at least one mode required");
    if (alpha.size() != beta.size())
        throw std::invalid_argument("model: alpha and beta lengths differ");
    if (initial.size() != alpha.size())
        throw std::invalid_argument("model: initial length differs from alpha");
    for (std::size_t k = 0; k < alpha.size(); ++k) {
        if (!(alpha[k] >= 0.0) || !std::isfinite(alpha[k]))
            throw std::invalid_argument("model: alpha entries must be non-negative and finite");
        if (!(beta[k] >= 0.0) || !std::isfinite(beta[k]))
            throw std::invalid_argument("model: beta entries must be non-negative and finite");
        if (alpha[k] == 0.0 && beta[k] == 0.0)
            throw std::invalid_argument("model: mode with alpha = beta = 0 rejected");
    }
    if (!(hurst > 0.0 && hurst < 1.0)) throw std::invalid_argument("hurst must lie in (0,1)");
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("horizon must be positive and finite");
    if (lambda_true && !(*lambda_true > 0.0 && std::isfinite(*lambda_true)))
        throw std::invalid_argument("lambda_true must be positive and finite");
    if (!labels.empty() && labels.size() != alpha.size())
        throw std::invalid_argument("model: label count differs from mode count");
}

SpectralModel heat1d(int n_modes, double lambda1, double lambda2, double hurst,
                     double horizon, const std::vector<double>& initial) {
    if (n_modes < 1) throw std::invalid_argument("heat1d: n_modes must be >= 1");
    require_scalars(lambda1, lambda2, hurst, horizon);

    SpectralModel m;
    m.alpha.resize(n_modes);
    m.beta.assign(n_modes, lambda2);
    m.labels.resize(n_modes);
    for (int k = 0; k < n_modes; ++k) {
        double kpi = (k + 1) * kPi;
        m.alpha[k] = kpi * kpi;
        m.labels[k] = {k + 1, 0};
    }
    m.hurst = hurst;
    m.horizon = horizon;
    m.lambda_true = lambda1;
    m.initial = pad_initial(initial, m.alpha.size());
    m.growth = GrowthSpec{1, 0, 1};
    m.dimension = 1;
    m.validate();
    return m;
}

SpectralModel heat2d(int modes_per_axis, double lambda1, double lambda2, double hurst,
                     double horizon) {
    if (modes_per_axis < 1) throw std::invalid_argument("heat2d: modes_per_axis must be >= 1");
    require_scalars(lambda1, lambda2, hurst, horizon);

    std::vector<ModeLabel> order;
    for (int k1 = 1; k1 <= modes_per_axis; ++k1)
        for (int k2 = 1; k2 <= modes_per_axis; ++k2) order.push_back({k1, k2});
    std::sort(order.begin(), order.end(), [](const ModeLabel& a, const ModeLabel& b) {
        int sa = a.k1 * a.k1 + a.k2 * a.k2, sb = b.k1 * b.k1 + b.k2 * b.k2;
        if (sa != sb) return sa < sb;
        if (a.k1 != b.k1) return a.k1 < b.k1;
        return a.k2 < b.k2;
    });

    SpectralModel m;
    m.labels = order;
    m.alpha.resize(order.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        m.alpha[i] = (order[i].k1 * order[i].k1 + order[i].k2 * order[i].k2) * kPi * kPi;
    m.beta.assign(order.size(), lambda2);
    m.hurst = hurst;
    m.horizon = horizon;
    m.lambda_true = lambda1;
    m.initial.assign(order.size(), 0.0);
    m.growth = GrowthSpec{1, 0, 2};
    m.dimension = 2;
    m.validate();
    return m;
}

SpectralModel raw_model(std::vector<double> alpha, std::vector<double> beta, double hurst,
                        double horizon, std::optional<double> lambda_true,
                        std::vector<double> initial) {
    SpectralModel m;
    std::size_t n = alpha.size();
    m.alpha = std::move(alpha);
    m.beta = std::move(beta);
    m.hurst = hurst;
    m.horizon = horizon;
    m.lambda_true = lambda_true;
    m.initial = pad_initial(std::move(initial), n);
    m.dimension = 1;
    m.validate();
    return m;
}

ExistenceResult check_existence(const GrowthSpec& g) {
    require_growth(g);
    int m = std::max(g.m1, g.m2);
    if (m < 1) return {false, 0.0};
    // Any gamma > d/(2m) certifies convergence; report twice the threshold.
    return {true, double(g.d) / double(m)};
}

ConditionReport check_consistency(const GrowthSpec& g, double hurst) {
    require_growth(g);
    if (!(hurst > 0.0 && hurst < 1.0)) throw std::invalid_argument("hurst must lie in (0,1)");

    ConditionReport r;
    ExistenceResult ex = check_existence(g);
    r.existence_ok = ex.ok;
    r.gamma_witness = ex.gamma_witness;

    double M1 = 2.0 * g.m1 / g.d;
    double M2 = 2.0 * g.m2 / g.d;

    if (g.m2 == 0) {
        r.theoretical_lse_consistent = true;
        r.clause = "beta-zero";
    } else if (g.m1 > g.m2) {
        r.theoretical_lse_consistent = true;
        r.clause = "m1>m2";
    } else if (g.m1 == g.m2) {
        r.theoretical_lse_consistent = true;
        r.clause = "m1=m2 (beta-zero form)";
    } else if (hurst < 0.75) {
        r.theoretical_lse_consistent = g.m1 > -0.25 * g.d + 0.5 * g.m2;
        r.clause = "m1<m2, H<3/4";
    } else {
        r.theoretical_lse_consistent = g.m1 > -0.25 * g.d + g.m2 * (2.0 * hurst - 1.0);
        r.clause = "m1<m2, H>=3/4";
    }

    double slack = 2.0 * (M1 - hurst * std::max(M1, M2));
    r.pathwise_extra_ok = r.theoretical_lse_consistent && slack >= -1.0;

    if (g.m2 < g.m1)
        r.c_limit = 0.0;
    else if (g.m2 > g.m1)
        r.c_limit = std::numeric_limits<double>::infinity();
    else {
        // Equal exponents: only the growth orders are known here, not the
        // constants, so the ratio limit is conventionally reported as 1.
        r.c_limit = 1.0;
        r.notes = "c_limit taken as 1: equal growth exponents";
    }
    if (hurst == 0.75) {
        if (!r.notes.empty()) r.notes += "; ";
        r.notes += "H=3/4 boundary: logarithmic-factor regime";
    }
    return r;
}

RateSpec theoretical_rate(const GrowthSpec& g, double hurst) {
    ConditionReport r = check_consistency(g, hurst);
    if (!r.theoretical_lse_consistent)
        throw std::invalid_argument("theoretical_rate: consistency conditions fail for this model");

    double M1 = 2.0 * g.m1 / g.d;
    double M2 = 2.0 * g.m2 / g.d;
    RateSpec rate;
    rate.log_factor = (hurst == 0.75);

    bool beta_dominant = g.m1 < g.m2;
    if (!beta_dominant) {
        rate.exponent = (hurst <= 0.75) ? -(M1 + 1.0) / 2.0
                                        : -(4.0 * M1 * (1.0 - hurst) + 1.0) / 2.0;
    } else {
        rate.exponent = (hurst <= 0.75)
                            ? -(2.0 * M1 - M2 + 1.0) / 2.0
                            : -(2.0 * (M1 + M2 * (1.0 - 2.0 * hurst)) + 1.0) / 2.0;
    }
    return rate;
}

ConditionReport check_consistency(const SpectralModel& model) {
    if (!model.growth)
        throw std::invalid_argument(
            "check_consistency: model has no growth metadata (raw sequences); use a preset");
    return check_consistency(*model.growth, model.hurst);
}

RateSpec theoretical_rate(const SpectralModel& model) {
    if (!model.growth)
        throw std::invalid_argument(
            "theoretical_rate: model has no growth metadata (raw sequences); use a preset");
    return theoretical_rate(*model.growth, model.hurst);
}

}  // namespace spde
