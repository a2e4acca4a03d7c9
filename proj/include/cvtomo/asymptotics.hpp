#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cvtomo/basis.hpp"

namespace cvtomo {

/// Single-beta covariance entry C_{m1 m2, m3 m4}(beta) =
/// sum_n conj(A_{n,(m1,m2)}) A_{n,(m3,m4)}. n_cap < 0 applies the truncation
/// rule with extra margin so the dropped tail is below ~1e-12.
cplx covariance_entry(cplx beta, int m1, int m2, int m3, int m4, int n_cap = -1);

struct ScalingFit {
    int m1 = 0, m2 = 0, m3 = 0, m4 = 0;
    int parity = 0;  // (m1+m2+m3+m4) mod 2
    std::vector<double> radii;
    std::vector<double> magnitudes;  // |C_m(r)| / |C_0000(r)|
    double fitted_slope = 0.0;
    double r_squared = 1.0;
    bool reliable = true;  // r^2 >= 0.99 (flat ratios count as slope 0)
};

/// Log-log fits of diagonal-normalized covariance magnitudes against the
/// radius, for every index 4-tuple with entries <= m_c. The expected slopes
/// are 0 for even parity and -1 for odd parity.
std::vector<ScalingFit> parity_scaling_fit(int m_c, const std::vector<double>& radii,
                                           double phase_angle = 0.7);

/// Raw integral of e^{-2x^2} H_{m1} H_{m2} H_{m3} H_{m4} over the line,
/// by Gauss-Hermite quadrature with 2(m1+m2+m3+m4)+16 nodes.
double hermite_quartic_integral(int m1, int m2, int m3, int m4);

/// Homodyne covariance for one quadrature angle over the Fock basis with
/// cutoff m_c (rows indexed like sensing columns: m1*(m_c+1)+m2).
Eigen::MatrixXcd homodyne_covariance_single(int m_c, double theta);

/// Sum over a set of quadrature angles.
Eigen::MatrixXcd homodyne_covariance(int m_c, const std::vector<double>& thetas);

struct CorrespondenceReport {
    double max_rel_deviation = 0.0;
    std::vector<double> scalars;  // fitted Q_n/homodyne scale per angle
};

/// Entrywise match of the large-radius Q_n covariance against the homodyne
/// covariance at equal angles, after a single fitted scalar per angle.
/// Angles default to the half-ring set pi*j/(m_c+1).
CorrespondenceReport homodyne_qn_correspondence(int m_c, double radius,
                                                std::vector<double> thetas = {});

}  // namespace cvtomo
