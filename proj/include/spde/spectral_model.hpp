#pragma once

#include <optional>
#include <string>
#include <vector>

namespace spde {

// Asymptotic growth of the eigenvalue sequences: alpha_k ~ k^{2*m1/d},
// beta_k ~ k^{2*m2/d} on a d-dimensional domain.  m2 = 0 marks beta
// sequences that are bounded (or identically zero).
struct GrowthSpec {
    int m1 = 0;
    int m2 = 0;
    int d = 1;
};

// Eigenfunction index for field reconstruction; k2 = 0 in one dimension.
struct ModeLabel {
    int k1 = 0;
    int k2 = 0;
};

// Diagonalized equation: mode k evolves with drift mu_k = lambda*alpha_k
// + beta_k against its own scalar fractional noise.
struct SpectralModel {
    std::vector<double> alpha;
    std::vector<double> beta;
    double hurst = 0.5;
    double horizon = 1.0;
    std::optional<double> lambda_true;
    std::vector<double> initial;           // x_k(0), zero-padded to alpha.size()
    std::optional<GrowthSpec> growth;
    std::vector<ModeLabel> labels;         // empty for raw models
    int dimension = 1;                     // spatial dimension of the basis

    int n_modes() const { return int(alpha.size()); }
    double mu(int k, double lambda) const { return lambda * alpha[k] + beta[k]; }
    void validate() const;
};

struct ConditionReport {
    bool existence_ok = false;
    double gamma_witness = 0.0;
    bool theoretical_lse_consistent = false;
    std::string clause;                    // which consistency condition fired
    bool pathwise_extra_ok = false;
    double c_limit = 0.0;                  // lim beta_k / alpha_k, +inf possible
    std::string notes;
};

struct RateSpec {
    double exponent = 0.0;
    bool log_factor = false;
    double regime_switch = 0.75;           // Hurst value separating the variance regimes
};

SpectralModel heat1d(int n_modes, double lambda1, double lambda2, double hurst,
                     double horizon, const std::vector<double>& initial = {});
SpectralModel heat2d(int modes_per_axis, double lambda1, double lambda2, double hurst,
                     double horizon);

// Raw model from explicit sequences; growth metadata absent, so the
// asymptotic checkers below refuse it.
SpectralModel raw_model(std::vector<double> alpha, std::vector<double> beta,
                        double hurst, double horizon, std::optional<double> lambda_true,
                        std::vector<double> initial = {});

struct ExistenceResult {
    bool ok = false;
    double gamma_witness = 0.0;
};

// Solution exists iff the eigenvalues grow: max(m1, m2) >= 1.  The witness
// is an exponent for which the resolvent series converges.
ExistenceResult check_existence(const GrowthSpec& g);

ConditionReport check_consistency(const GrowthSpec& g, double hurst);

// RMSE decay exponent of the theoretical estimator in the mode count.
RateSpec theoretical_rate(const GrowthSpec& g, double hurst);

// Conveniences that demand growth metadata and throw for raw models.
ConditionReport check_consistency(const SpectralModel& model);
RateSpec theoretical_rate(const SpectralModel& model);

}  // namespace spde
