#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "cvtomo/basis.hpp"

namespace cvtomo {

enum class MeasureMode { Qn, Husimi, Wigner };

/// Stacked linear map from the vectorized state to measurement expectations.
/// Column order: ket component index (outer, slower) then bra component
/// (inner, fastest); for the Fock basis this is col = m1*(m_c+1) + m2.
struct SensingMatrix {
    Eigen::MatrixXcd entries;
    std::vector<MeasurementSetting> settings;
    BasisSpec basis;
    MeasureMode mode = MeasureMode::Qn;
    std::vector<int> row_offsets;  // settings.size()+1 entries

    int rows_of(int setting) const { return row_offsets[size_t(setting) + 1] - row_offsets[size_t(setting)]; }
};

/// Rows of one setting, optionally with entrywise derivatives with respect
/// to Re(beta) and Im(beta) (used by the condition-number gradient).
struct SettingBlock {
    Eigen::MatrixXcd value;
    Eigen::MatrixXcd d_re;
    Eigen::MatrixXcd d_im;
};

SettingBlock build_setting_block(const MeasurementSetting& setting, const BasisSpec& basis,
                                 MeasureMode mode, bool with_derivatives);

SensingMatrix build_sensing(const std::vector<MeasurementSetting>& settings,
                            const BasisSpec& basis, MeasureMode mode = MeasureMode::Qn);

struct ConditionReport {
    double kappa = 0.0;           // +inf sentinel when rank deficient
    double sigma_max = 0.0;
    double sigma_min = 0.0;
    int rank = 0;
    double figure_of_merit = 0.0;  // kappa * sqrt(N_beta)
};

/// Rank counts singular values above 1e-10 * sigma_max.
ConditionReport condition_number(const SensingMatrix& A);

/// Condition number of a Hermitian PSD matrix (eigenvalue ratio); the rank
/// threshold is squared to stay consistent with the singular-value path.
ConditionReport condition_number_hermitian(const Eigen::MatrixXcd& C, int n_settings);

struct CovarianceBlocks {
    Eigen::MatrixXcd C;                    // A^dag A
    std::vector<int> block_index;          // per column: k = m1 - m2 (Fock only)
    bool has_blocks = false;
};

CovarianceBlocks covariance(const SensingMatrix& A);

/// Sum of per-setting covariance contributions; additive building block for
/// ring families and greedy search.
Eigen::MatrixXcd covariance_of_settings(const std::vector<MeasurementSetting>& settings,
                                        const BasisSpec& basis, MeasureMode mode = MeasureMode::Qn);

/// Pinching C -> sum_k P_k C P_k: off-diagonal blocks are wiped, diagonal
/// blocks kept. Requires block indexing.
CovarianceBlocks pinch(const CovarianceBlocks& cb);

/// Heuristic condition-number estimate sum_{i,j} exp[(d_i-d_j)^2/2] for a
/// cat state probed at beta.
double cn_estimate_cat(const std::vector<cplx>& alphas, cplx beta);

struct CatIcFlags {
    bool on_bisector = false;       // (i) d_i = d_j for some pair
    bool collinear = false;         // (ii) beta collinear with some alpha pair
    bool pair_coincidence = false;  // (iii) equal product and subtended angle
    bool suppressed = false;        // (iv) max (d_i-d_j)^2/2 beyond threshold
    double max_suppression_exponent = 0.0;
};

CatIcFlags cat_ic_diagnostics(const std::vector<cplx>& alphas, cplx beta,
                              double geom_tol = 1e-9, double suppression_threshold = 8.0);

/// Homodyne quadrature-density rows at angle theta over a grid of x values,
/// for a Fock basis: entry = e^{i(m1-m2)theta} psi_m1(x) psi_m2(x).
Eigen::MatrixXcd homodyne_row(double theta, const std::vector<double>& grid, const BasisSpec& fock_basis);

/// Vectorize a component-basis operator with the pinned column order.
Eigen::VectorXcd vectorize(const Eigen::MatrixXcd& rho);
Eigen::MatrixXcd unvectorize(const Eigen::VectorXcd& v);

}  // namespace cvtomo
