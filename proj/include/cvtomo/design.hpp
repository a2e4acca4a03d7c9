#pragma once

#include <array>
#include <utility>
#include <vector>

#include "cvtomo/sensing.hpp"

namespace cvtomo {

enum class RingFamily { FRC, HRC };

/// Ring displacement families: FRC places 2m_c+1 betas at phases
/// 2*pi*j/(2m_c+1), HRC places m_c+1 betas at phases pi*j/(m_c+1).
std::vector<MeasurementSetting> ring_settings(RingFamily family, int m_c, double radius);

struct RadiusScanPoint {
    double radius = 0.0;
    double kappa = 0.0;
    double merit = 0.0;
};

std::vector<RadiusScanPoint> radius_scan(RingFamily family, int m_c,
                                         const std::vector<double>& radii);

/// Ring radius minimizing kappa: coarse scan over [lo, hi] followed by
/// golden-section refinement. Returns (radius, kappa).
std::pair<double, double> optimal_ring_radius(RingFamily family, int m_c,
                                              double lo = 0.5, double hi = 12.0);

/// Gradient of kappa(C) with respect to (Re beta_i, Im beta_i), from the
/// first-order perturbation of the extreme eigenvalues of C = A^dag A.
/// Throws DegenerateSpectrumError when an extreme eigenvalue gap (relative
/// to lambda_max) is below 1e-8.
std::vector<std::array<double, 2>> cn_gradient(const std::vector<MeasurementSetting>& settings,
                                               const BasisSpec& basis,
                                               MeasureMode mode = MeasureMode::Qn);

/// kappa(C) for a beta configuration; shared by the optimizer and its tests.
double kappa_c_of(const std::vector<MeasurementSetting>& settings, const BasisSpec& basis,
                  MeasureMode mode = MeasureMode::Qn);

struct DesignReport {
    std::vector<MeasurementSetting> settings;
    ConditionReport condition;
    BasisSpec basis;
    std::vector<std::pair<int, double>> history;  // (iteration, kappa(A)) accepted steps
    bool converged = false;
};

struct OptimizeOptions {
    int max_iters = 200;
    double tol = 1e-6;        // stop on relative kappa improvement below this
    double armijo_c = 1e-4;
    double shrink = 0.5;
    MeasureMode mode = MeasureMode::Qn;
};

/// Backtracking steepest descent on kappa(C) over the betas. n_c is kept
/// uniform across settings and refreshed from the truncation rule whenever
/// the configuration grows.
DesignReport optimize_settings(const std::vector<MeasurementSetting>& initial,
                               const BasisSpec& basis, const OptimizeOptions& opts = {});

struct GreedyOptions {
    int grid_n = 61;
    int descent_steps = 20;
    int beta_budget = 64;
    double grid_margin = 3.0;  // half-width = max|alpha| + margin
};

/// Budget exhaustion during greedy selection; carries whatever was chosen.
struct GreedyBudgetError : BudgetExceededError {
    DesignReport partial;
    GreedyBudgetError(const std::string& msg, DesignReport p)
        : BudgetExceededError(msg), partial(std::move(p)) {}
};

/// Greedy incremental selection for displaced-Fock bases: start from m_c = 0,
/// add the argmin-kappa beta (grid search plus local refinement), raise m_c
/// once kappa(A) falls below the threshold, stop at m_c_target.
DesignReport greedy_select(const std::vector<cplx>& alphas, int m_c_target,
                           double kappa_threshold, const GreedyOptions& opts = {});

struct MfrcResult {
    double kappa_single = 0.0;  // min_r kappa of one full ring
    double kappa_double = 0.0;  // min_{r1,r2} kappa of two full rings
    double r_single = 0.0;
    double r1 = 0.0, r2 = 0.0;
    double improvement = 0.0;          // (single - double)/single on kappa(A)
    double improvement_kappa_c = 0.0;  // same on kappa(C)
};

MfrcResult mfrc_compare(int m_c, const std::vector<double>& radii_grid);

}  // namespace cvtomo
