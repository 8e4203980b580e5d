#pragma once

#include <string>
#include <vector>

#include "spde/simulate.hpp"
#include "spde/spectral_model.hpp"

namespace spde {

// Everything the estimators need from one realization: per-mode endpoint
// squares and the quadratic functional, plus the model scalars.
struct SufficientStats {
    std::vector<double> alpha, beta, x0sq, xTsq, qvar;
    double hurst = 0.5;
    double horizon = 1.0;

    int n_modes() const { return int(alpha.size()); }
    void validate() const;
};

struct EstimateResult {
    enum class Case { kUnique, kNone, kTwoRootsGreater, kConstantMap };

    double value = 0.0;       // zero whenever case_tag == kNone
    Case case_tag = Case::kNone;
    int iterations = 0;
    double residual = 0.0;    // |R(value) - value|
    double r_at_zero = 0.0;
};

const char* to_string(EstimateResult::Case c);

SufficientStats compute_stats(const ModeTrajectorySet& traj, const SpectralModel& model);

// Stats restricted to the first n modes.
SufficientStats prefix_stats(const SufficientStats& s, int n);

// Right-hand-side map R(Lambda) whose fixed point defines the pathwise
// estimator.  Constant in Lambda at hurst = 1/2; monotone otherwise.
double r_function(const SufficientStats& s, double lambda);

// dR/dLambda for Lambda > 0; sign equals sign(1 - 2*hurst).
double r_prime(const SufficientStats& s, double lambda);

// Fixed-point solve of R(Lambda) = Lambda on (0, inf) with the monotone /
// concave case analysis; failures surface as case kNone, never silently.
EstimateResult pathwise_lse(const SufficientStats& s);

// R evaluated at the true drift; usable only when lambda_true is known.
double theoretical_lse(const SufficientStats& s, double lambda_true);

// Divergence-sense integral of x against its own noise from observables:
// (x(T)^2 - x(0)^2)/2 minus the compensation.
double skorokhod_integral_pathwise(double x0sq, double xTsq, double mu, double hurst,
                                   double horizon);

}  // namespace spde
