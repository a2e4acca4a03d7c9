#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cvtomo {

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;      // the measured quantity
    double threshold = 0.0;  // what it was compared against
    std::string detail;
};

/// Perturbation-theory gradient of kappa(C) against central finite
/// differences on random configurations (m_c <= 3); max relative error.
CheckResult check_gradient(int n_configs = 20, uint64_t seed = 11);

/// ||tau - rho||_F <= ||rho' - rho||_F on random noisy trials, with tau the
/// physical projection of rho'.
CheckResult check_projection_lemma(int trials = 1000, uint64_t seed = 12);

/// kappa(pinch(C)) <= kappa(C) on random setting sets.
CheckResult check_pinching(int trials = 500, uint64_t seed = 13);

/// Parity selection rule: diagonal-normalized log-log slopes 0 (even) or -1
/// (odd) within a tolerance, with fit r^2 above 0.99.
CheckResult check_parity_scaling(int m_c = 2, double slope_tol = 0.15);

/// The cmd_verify bundle (scaling fits, pinching, projection, gradient).
std::vector<CheckResult> run_verification_suite();

/// Spearman rank correlation with average ranks on ties.
double spearman_correlation(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace cvtomo
