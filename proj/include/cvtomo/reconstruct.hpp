#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cvtomo/sensing.hpp"
#include "cvtomo/statesim.hpp"

namespace cvtomo {

/// Stacked (A, b) pair from a measurement record: per setting the rows
/// n = 0..n_c and the matching count frequencies; the overflow bin has no
/// row and is dropped from both sides.
struct LinearSystem {
    SensingMatrix A;
    Eigen::VectorXd b;
};

LinearSystem assemble_system(const MeasurementRecord& record, const BasisSpec& basis);

/// SVD pseudoinverse minimizer of ||A vec(rho) - b||_2, Hermitized by
/// averaging with its adjoint. Throws IncompleteSensingError when
/// rank(A) < dimension.
Eigen::MatrixXcd least_squares(const SensingMatrix& A, const Eigen::VectorXd& b);

/// Frobenius-closest density matrix: eigenvalues projected onto the
/// probability simplex, eigenvectors kept. Input is symmetrized first.
/// Assumes an orthonormal (Fock) basis.
Eigen::MatrixXcd project_physical(const Eigen::MatrixXcd& rho_raw);

/// Same projection for a coherent-basis coefficient matrix, carried out in
/// the Gram-congruent frame where Frobenius geometry matches the operator's.
Eigen::MatrixXcd project_physical_coherent(const Eigen::MatrixXcd& coeff,
                                           const std::vector<cplx>& alphas);

/// Euclidean projection of a real vector onto the probability simplex.
Eigen::VectorXd project_simplex(const Eigen::VectorXd& v);

struct FitResult {
    Eigen::MatrixXcd rho;
    double objective = 0.0;  // ||A vec(rho) - b||_2
    int iterations = 0;
    bool converged = false;
};

/// Accelerated projected gradient descent on ||A vec(sigma) - b||^2 over
/// the physical set, with monotone restarts; works for rank-deficient A.
FitResult fit_physical(const SensingMatrix& A, const Eigen::VectorXd& b,
                       int max_iters = 2000, double tol = 1e-12);

struct ImleResult {
    Eigen::MatrixXcd rho;
    int iterations = 0;
    double log_likelihood = 0.0;
    bool converged = false;
    bool monotone = true;  // log-likelihood never dropped beyond 1e-12 slack
};

/// Iterative maximum likelihood (R rho R fixed point) in a Fock basis of
/// dimension m_c+1. Predicted probabilities are floored at 1e-12.
ImleResult imle(const MeasurementRecord& record, int m_c, int max_iters = 2000,
                double tol = 1e-12);

/// Uhlmann fidelity tr sqrt(sqrt(rho) sigma sqrt(rho)).
double fidelity(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma);
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Half the trace norm of rho - sigma.
double trace_distance(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma);

/// Fidelity lower bound 1 - kappa sqrt(r) ||rho||_F rel_noise / 2, floored
/// at zero.
double error_bound(double kappa, int r, double rho_norm_f, double rel_noise);

struct TrilaterationOptions {
    int grid_n = 81;
    double grid_margin = 4.0;       // half-width = max|beta| + margin
    double peak_rel_threshold = 0.1;
    double merge_radius = 0.6;
    int imle_iters = 400;
};

struct TrilaterationResult {
    std::vector<cplx> alphas;        // peak locations, strongest first
    Eigen::MatrixXcd husimi;         // the scanned Q map (row = im index)
    double grid_halfwidth = 0.0;
    int m_c_used = 0;
};

/// Locate cat-state components: iMLE estimate from the record, Husimi map
/// on a grid, centroid-refined local maxima. Throws InsufficientSettingsError
/// (< 3 settings) or NotACatError (no isolated, well-separated peaks).
TrilaterationResult trilaterate_alphas(const MeasurementRecord& record, int p_max,
                                       const TrilaterationOptions& opts = {});

struct CatPipelineResult {
    std::vector<cplx> alphas;
    DensityMatrix state;  // coherent-basis coefficients, physical
    double residual = 0.0;
};

/// Full cat-state pipeline: trilateration then least squares over the
/// coherent basis at the estimated components, projected to physical.
CatPipelineResult cat_pipeline(const MeasurementRecord& record, int p_max,
                               const TrilaterationOptions& opts = {});

}  // namespace cvtomo
