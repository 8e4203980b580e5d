#pragma once

#include <vector>

namespace spde {

// Interpolating sample quantile (the common "type 7" rule); data must be
// sorted ascending.
double quantile_sorted(const std::vector<double>& sorted, double p);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    int n_points = 0;
};

// Ordinary least squares of y on x; needs >= 3 points for the stderr.
LinearFit ols_fit(const std::vector<double>& x, const std::vector<double>& y);

// Inverse standard normal CDF, p in (0,1); rational approximation polished
// by one Halley step, accurate to ~1e-14.
double normal_quantile(double p);

// Regularized incomplete beta I_x(a,b) and its inverse in x.
double incomplete_beta(double a, double b, double x);
double incomplete_beta_inverse(double a, double b, double p);

}  // namespace spde
