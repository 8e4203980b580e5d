#include "spde/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "spde/errors.hpp"

namespace spde {

namespace {

// Below this value of x = mu*T the three-term closed form loses digits to
// cancellation; alternating power series are used instead.  Both branches
// agree to ~1e-12 near the crossover.
constexpr double kSeriesCrossover = 2.0;
constexpr int kMaxTerms = 200;

void require_hurst(double hurst) {
    if (!(hurst > 0.0 && hurst < 1.0))
        throw std::invalid_argument("hurst must lie in (0,1)");
}

void require_params(const DeltaParams& p) {
    if (!(p.mu > 0.0) || !std::isfinite(p.mu))
        throw std::invalid_argument("mu must be positive and finite");
    require_hurst(p.hurst);
    if (!(p.horizon > 0.0) || !std::isfinite(p.horizon))
        throw std::invalid_argument("horizon must be positive and finite");
}

double gamma_series(double h, double x) {
    double ap = h;
    double del = 1.0 / h;
    double sum = del;
    for (int i = 0; i < kMaxTerms; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-14)
            return sum * std::exp(-x + h * std::log(x));
    }
    throw NumericError("lower_incomplete_gamma: series did not converge");
}

// Lentz continued fraction for the upper tail Gamma(h,x), x >= h+1.
double gamma_upper_cf(double h, double x) {
    const double tiny = std::numeric_limits<double>::min() / 1e-14;
    double b = x + 1.0 - h;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double f = d;
    for (int i = 1; i <= kMaxTerms; ++i) {
        double an = -double(i) * (double(i) - h);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        f *= del;
        if (std::fabs(del - 1.0) < 1e-14)
            return f * std::exp(-x + h * std::log(x));
    }
    throw NumericError("lower_incomplete_gamma: continued fraction did not converge");
}

// Sum of (-1)^n x^n * term(n); the callers' terms decay at least
// factorially so the loop terminates quickly for x below the crossover.
template <class Term>
double alternating_sum(double x, Term term) {
    double power = 1.0;
    double sum = 0.0;
    for (int n = 0; n < kMaxTerms; ++n) {
        double t = power * term(n);
        sum += t;
        if (std::fabs(t) <= 1e-17 * std::fabs(sum) + 1e-300) return sum;
        power *= -x / double(n + 1);
    }
    throw NumericError("compensation series did not converge");
}

}  // namespace

double lower_incomplete_gamma(double h, double x) {
    if (!(h > 0.0) || !std::isfinite(h))
        throw std::invalid_argument("lower_incomplete_gamma: h must be positive");
    if (!(x >= 0.0))
        throw std::invalid_argument("lower_incomplete_gamma: x must be non-negative");
    if (x == 0.0) return 0.0;
    if (x < h + 1.0) return gamma_series(h, x);
    return std::tgamma(h) - gamma_upper_cf(h, x);
}

double compensation_delta(const DeltaParams& p) {
    require_params(p);
    double H = p.hurst, T = p.horizon;
    if (H == 0.5) return 0.5 * T;
    double x = p.mu * T;
    double h2 = 2.0 * H;
    if (x < kSeriesCrossover) {
        // T^{2H} [ e^{-x}/2 + sum_n (-1)^n x^{n+1}/n! (H/(2H+n) - (H-1/2)/(2H+1+n)) ]
        double s = alternating_sum(
            x, [&](int n) { return H / (h2 + n) - (H - 0.5) / (h2 + 1.0 + n); });
        return std::pow(T, h2) * (0.5 * std::exp(-x) + x * s);
    }
    double g1 = lower_incomplete_gamma(h2, x);
    double g2 = lower_incomplete_gamma(h2 + 1.0, x);
    return 0.5 * std::pow(T, h2) * std::exp(-x) - (H - 0.5) * std::pow(p.mu, -h2) * g2 +
           T * H * std::pow(p.mu, 1.0 - h2) * g1;
}

double delta_prime(const DeltaParams& p) {
    require_params(p);
    double H = p.hurst, T = p.horizon;
    if (H == 0.5) return 0.0;
    double x = p.mu * T;
    double h2 = 2.0 * H;
    if (x < kSeriesCrossover) {
        double s = alternating_sum(
            x, [&](int n) { return 1.0 / ((h2 + n) * (h2 + n + 1.0)); });
        return H * (1.0 - h2) * std::pow(T, h2 + 1.0) * s;
    }
    double g1 = lower_incomplete_gamma(h2, x);
    double g2 = lower_incomplete_gamma(h2 + 1.0, x);
    return H * (1.0 - h2) *
           (T * std::pow(p.mu, -h2) * g1 - std::pow(p.mu, -h2 - 1.0) * g2);
}

double delta_second(const DeltaParams& p) {
    require_params(p);
    double H = p.hurst, T = p.horizon;
    if (H == 0.5) return 0.0;
    double x = p.mu * T;
    double h2 = 2.0 * H;
    if (x < kSeriesCrossover) {
        double s = alternating_sum(
            x, [&](int n) { return 1.0 / ((h2 + n + 1.0) * (h2 + n + 2.0)); });
        return H * (h2 - 1.0) * std::pow(T, h2 + 2.0) * s;
    }
    double g1 = lower_incomplete_gamma(h2, x);
    double g2 = lower_incomplete_gamma(h2 + 1.0, x);
    return H * (h2 - 1.0) * std::pow(p.mu, -h2 - 2.0) * (h2 * x * g1 - (h2 + 1.0) * g2);
}

double compensation_delta(double mu, double hurst, double horizon) {
    return compensation_delta(DeltaParams{mu, hurst, horizon});
}
double delta_prime(double mu, double hurst, double horizon) {
    return delta_prime(DeltaParams{mu, hurst, horizon});
}
double delta_second(double mu, double hurst, double horizon) {
    return delta_second(DeltaParams{mu, hurst, horizon});
}

double delta_at_zero(double hurst, double horizon) {
    require_hurst(hurst);
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("horizon must be positive and finite");
    return 0.5 * std::pow(horizon, 2.0 * hurst);
}

double delta_prime_at_zero(double hurst, double horizon) {
    require_hurst(hurst);
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("horizon must be positive and finite");
    return (1.0 - 2.0 * hurst) * std::pow(horizon, 2.0 * hurst + 1.0) /
           (2.0 * (2.0 * hurst + 1.0));
}

double unit_fou_stationary_variance(double hurst) {
    require_hurst(hurst);
    return hurst * std::tgamma(2.0 * hurst);
}

}  // namespace spde
