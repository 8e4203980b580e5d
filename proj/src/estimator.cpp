#include "spde/estimator.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "spde/errors.hpp"
#include "spde/special_functions.hpp"

namespace spde {

namespace {

constexpr int kMaxIterations = 200;

double residual_tolerance(double x) { return 1e-10 * std::max(1.0, x); }
constexpr double kBracketTolerance = 1e-12;

double denominator(const SufficientStats& s) {
    double den = 0.0;
    for (int k = 0; k < s.n_modes(); ++k) den += s.alpha[k] * s.alpha[k] * s.qvar[k];
    if (!(den > 0.0) || !std::isfinite(den))
        throw std::invalid_argument("estimator: degenerate denominator (all alpha^2*qvar vanish)");
    return den;
}

// R'(Lambda) extended to Lambda = 0 through the right limit of the
// compensation derivative.
double r_prime_impl(const SufficientStats& s, double lambda) {
    double den = denominator(s);
    double num = 0.0;
    for (int k = 0; k < s.n_modes(); ++k) {
        if (s.alpha[k] == 0.0) continue;
        double mu = s.alpha[k] * lambda + s.beta[k];
        double dp = mu > 0.0 ? delta_prime(mu, s.hurst, s.horizon)
                             : delta_prime_at_zero(s.hurst, s.horizon);
        num += s.alpha[k] * s.alpha[k] * dp;
    }
    return num / den;
}

struct RootResult {
    double x;
    int iterations;
};

// Safeguarded Newton on g with a sign bracket g(lo) > 0 > g(hi); falls
// back to bisection whenever the Newton step leaves the bracket or stalls.
template <class F, class DF>
RootResult newton_bracketed(F g, DF dg, double lo, double hi, double start,
                            const char* context) {
    double x = std::min(std::max(start, lo), hi);
    double step_prev = hi - lo;
    double step = step_prev;
    double f = g(x);
    if (std::fabs(f) <= residual_tolerance(x)) return {x, 0};
    double df = dg(x);
    for (int it = 1; it <= kMaxIterations; ++it) {
        bool reject = (((x - hi) * df - f) * ((x - lo) * df - f) > 0.0) ||
                      (std::fabs(2.0 * f) > std::fabs(step_prev * df));
        step_prev = step;
        if (reject) {
            step = 0.5 * (hi - lo);
            x = lo + step;
        } else {
            step = f / df;
            x -= step;
        }
        f = g(x);
        if (std::fabs(f) <= residual_tolerance(x) || hi - lo <= kBracketTolerance)
            return {x, it};
        if (f > 0.0)
            lo = x;
        else
            hi = x;
        df = dg(x);
    }
    std::ostringstream msg;
    msg << "pathwise_lse: no convergence after " << kMaxIterations << " iterations ("
        << context << ", bracket [" << lo << ", " << hi << "], residual " << f << ")";
    throw NumericError(msg.str());
}

// Doubles hi until g(hi) < 0; g is eventually negative in every branch
// that calls this (R grows sublinearly).
template <class F>
double expand_upper(F g, double hi, const char* context) {
    for (int it = 0; it < kMaxIterations; ++it) {
        if (g(hi) < 0.0) return hi;
        hi *= 2.0;
    }
    throw NumericError(std::string("pathwise_lse: no sign change found (") + context + ")");
}

}  // namespace

void SufficientStats::validate() const {
    std::size_t n = alpha.size();
    if (n == 0) throw std::invalid_argument("stats: at least one mode required");
    if (beta.size() != n || x0sq.size() != n || xTsq.size() != n || qvar.size() != n)
        throw std::invalid_argument("stats: per-mode vectors have unequal lengths");
    for (std::size_t k = 0; k < n; ++k) {
        bool ok = std::isfinite(alpha[k]) && std::isfinite(beta[k]) && std::isfinite(x0sq[k]) &&
                  std::isfinite(xTsq[k]) && std::isfinite(qvar[k]);
        if (!ok) throw std::invalid_argument("stats: non-finite entry");
        if (alpha[k] < 0.0 || beta[k] < 0.0 || x0sq[k] < 0.0 || xTsq[k] < 0.0 || qvar[k] < 0.0)
            throw std::invalid_argument("stats: negative entry");
    }
    if (!(hurst > 0.0 && hurst < 1.0)) throw std::invalid_argument("hurst must lie in (0,1)");
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("horizon must be positive and finite");
}

const char* to_string(EstimateResult::Case c) {
    switch (c) {
        case EstimateResult::Case::kUnique: return "unique";
        case EstimateResult::Case::kNone: return "none";
        case EstimateResult::Case::kTwoRootsGreater: return "two_roots_greater";
        case EstimateResult::Case::kConstantMap: return "constant_map";
    }
    return "unknown";
}

SufficientStats compute_stats(const ModeTrajectorySet& traj, const SpectralModel& model) {
    int n = model.n_modes();
    if (n > traj.n_modes())
        throw std::invalid_argument("compute_stats: model has more modes than trajectory");
    if (traj.grid.n_points() < 2)
        throw std::invalid_argument("compute_stats: need at least 2 grid points");

    SufficientStats s;
    s.alpha.assign(model.alpha.begin(), model.alpha.begin() + n);
    s.beta.assign(model.beta.begin(), model.beta.begin() + n);
    s.hurst = model.hurst;
    s.horizon = traj.grid.horizon;
    s.x0sq.resize(n);
    s.xTsq.resize(n);
    s.qvar.resize(n);

    int pts = traj.grid.n_points();
    double dt = traj.grid.dt();
    bool accumulated = int(traj.qvar.size()) >= n;
    for (int k = 0; k < n; ++k) {
        const double* x = traj.row(k);
        for (int i = 0; i < pts; ++i)
            if (!std::isfinite(x[i]))
                throw std::invalid_argument("compute_stats: non-finite trajectory value");
        s.x0sq[k] = x[0] * x[0];
        s.xTsq[k] = x[pts - 1] * x[pts - 1];
        if (accumulated) {
            s.qvar[k] = traj.qvar[k];
        } else {
            double q = 0.0;
            for (int i = 1; i < pts; ++i)
                q += 0.5 * dt * (x[i - 1] * x[i - 1] + x[i] * x[i]);
            s.qvar[k] = q;
        }
    }
    return s;
}

SufficientStats prefix_stats(const SufficientStats& s, int n) {
    if (n < 1 || n > s.n_modes()) throw std::invalid_argument("prefix_stats: bad mode count");
    SufficientStats out;
    out.alpha.assign(s.alpha.begin(), s.alpha.begin() + n);
    out.beta.assign(s.beta.begin(), s.beta.begin() + n);
    out.x0sq.assign(s.x0sq.begin(), s.x0sq.begin() + n);
    out.xTsq.assign(s.xTsq.begin(), s.xTsq.begin() + n);
    out.qvar.assign(s.qvar.begin(), s.qvar.begin() + n);
    out.hurst = s.hurst;
    out.horizon = s.horizon;
    return out;
}

double r_function(const SufficientStats& s, double lambda) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("r_function: lambda must be >= 0");
    double den = denominator(s);
    double num = 0.0;
    for (int k = 0; k < s.n_modes(); ++k) {
        double mu = s.alpha[k] * lambda + s.beta[k];
        double d = mu > 0.0 ? compensation_delta(mu, s.hurst, s.horizon)
                            : delta_at_zero(s.hurst, s.horizon);
        num += s.alpha[k] * (0.5 * (s.xTsq[k] - s.x0sq[k]) - d);
        num += s.alpha[k] * s.beta[k] * s.qvar[k];
    }
    return -num / den;
}

double r_prime(const SufficientStats& s, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("r_prime: lambda must be > 0");
    return r_prime_impl(s, lambda);
}

EstimateResult pathwise_lse(const SufficientStats& s) {
    s.validate();
    denominator(s);

    auto g = [&](double x) { return r_function(s, x) - x; };
    auto dg = [&](double x) { return r_prime_impl(s, x) - 1.0; };

    EstimateResult out;
    out.r_at_zero = r_function(s, 0.0);

    if (s.hurst == 0.5) {
        // R is a constant map; the fixed point is R(0) itself.
        if (out.r_at_zero > 0.0) {
            out.value = out.r_at_zero;
            out.case_tag = EstimateResult::Case::kUnique;
            out.residual = std::fabs(g(out.value));
        }
        return out;
    }

    if (s.hurst > 0.5 || out.r_at_zero > 0.0) {
        // Decreasing R, or increasing-concave R starting positive: a root
        // exists iff R(0) > 0 and is unique.
        if (out.r_at_zero <= 0.0) return out;
        double hi = expand_upper(g, std::max(1.0, 2.0 * out.r_at_zero), "unique branch");
        RootResult root = newton_bracketed(g, dg, 0.0, hi, out.r_at_zero, "unique branch");
        out.value = root.x;
        out.iterations = root.iterations;
        out.residual = std::fabs(g(root.x));
        out.case_tag = EstimateResult::Case::kUnique;
        return out;
    }

    // hurst < 1/2 with R(0) <= 0: R is increasing and concave, so g can
    // still cross zero twice.  Locate the stationary point of g via
    // R'(Lambda*) = 1 (R' is strictly decreasing).
    int iterations = 0;
    if (r_prime_impl(s, 0.0) <= 1.0) return out;  // g' <= 0 everywhere: no crossing

    double lo = 0.0, hi = 1.0;
    while (r_prime_impl(s, hi) >= 1.0) {
        hi *= 2.0;
        if (++iterations > kMaxIterations)
            throw NumericError("pathwise_lse: R' expansion did not terminate");
    }
    while (hi - lo > kBracketTolerance * std::max(1.0, hi) && ++iterations < 300) {
        double mid = 0.5 * (lo + hi);
        (r_prime_impl(s, mid) >= 1.0 ? lo : hi) = mid;
    }
    double stationary = 0.5 * (lo + hi);
    double g_star = g(stationary);

    if (std::fabs(g_star) <= residual_tolerance(stationary)) {
        out.value = stationary;
        out.case_tag = EstimateResult::Case::kUnique;
        out.iterations = iterations;
        out.residual = std::fabs(g_star);
        return out;
    }
    if (g_star < 0.0) return out;  // maximum of g below zero: no solution

    // Two crossings; the estimator is the greater one, right of the
    // stationary point where g is strictly decreasing.
    double upper = expand_upper(g, std::max(1.0, 2.0 * stationary), "two-root branch");
    RootResult root = newton_bracketed(g, dg, stationary, upper,
                                       0.5 * (stationary + upper), "two-root branch");
    out.value = root.x;
    out.iterations = iterations + root.iterations;
    out.residual = std::fabs(g(root.x));
    out.case_tag = EstimateResult::Case::kTwoRootsGreater;
    return out;
}

double theoretical_lse(const SufficientStats& s, double lambda_true) {
    if (!(lambda_true > 0.0) || !std::isfinite(lambda_true))
        throw std::invalid_argument("theoretical_lse: lambda_true must be positive");
    return r_function(s, lambda_true);
}

double skorokhod_integral_pathwise(double x0sq, double xTsq, double mu, double hurst,
                                   double horizon) {
    return 0.5 * (xTsq - x0sq) - compensation_delta(mu, hurst, horizon);
}

}  // namespace spde
