#pragma once

namespace spde {

// Arguments of the compensation term Delta(mu) and its derivatives.
// mu must be strictly positive; the mu -> 0+ limits are exposed separately
// as delta_at_zero / delta_prime_at_zero.
struct DeltaParams {
    double mu;
    double hurst;
    double horizon;
};

// Lower incomplete gamma integral_0^x e^{-s} s^{h-1} ds, relative accuracy
// about 1e-12 (series for x < h+1, continued fraction for the complement
// otherwise).
double lower_incomplete_gamma(double h, double x);

// Gap between the symmetric-sum and divergence integrals of a unit-noise
// mode with drift mu on [0,T].  Equals T/2 identically at hurst = 1/2.
double compensation_delta(const DeltaParams& p);
double compensation_delta(double mu, double hurst, double horizon);

// d/dmu of the compensation; sign equals sign(1 - 2*hurst).
double delta_prime(const DeltaParams& p);
double delta_prime(double mu, double hurst, double horizon);

// d^2/dmu^2 of the compensation; sign equals sign(2*hurst - 1).
double delta_second(const DeltaParams& p);
double delta_second(double mu, double hurst, double horizon);

// Right limits at mu = 0.
double delta_at_zero(double hurst, double horizon);
double delta_prime_at_zero(double hurst, double horizon);

// Stationary variance H*Gamma(2H) of the unit-coefficient mode with drift 1.
double unit_fou_stationary_variance(double hurst);

}  // namespace spde
