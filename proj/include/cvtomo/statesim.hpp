#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "cvtomo/basis.hpp"
#include "cvtomo/sensing.hpp"

namespace cvtomo {

/// Truncated state: Hermitian, unit trace, PSD up to rounding, expressed in
/// the coefficients of `basis`.
struct DensityMatrix {
    Eigen::MatrixXcd entries;
    BasisSpec basis;

    int dim() const { return int(entries.rows()); }

    /// Coefficient representation re-expressed in a Fock basis with cutoff
    /// m_c (exact for Fock input, truncating for coherent components).
    DensityMatrix to_fock(int m_c) const;

    double purity() const;
};

/// G G^dag / tr ensemble blended toward a random pure state by purity_knob.
DensityMatrix random_density(int m_c, double purity_knob, uint64_t seed);

/// Cat state sum_ij c_ij |a_i><a_j| normalized with exact coherent overlaps.
/// The coefficient matrix must be Hermitian PSD.
DensityMatrix cat_density(const std::vector<cplx>& alphas, const Eigen::MatrixXcd& coefficients);

/// <a_i|a_j> = exp(-(|a_i|^2+|a_j|^2)/2 + conj(a_i) a_j).
cplx coherent_overlap(cplx a_i, cplx a_j);

/// Exact outcome probabilities for n = 0..n_c; the last slot holds the
/// overflow mass 1 - sum (complement by definition).
Eigen::VectorXd exact_qn(const DensityMatrix& rho, const MeasurementSetting& setting);

/// One multinomial draw of size n_rep; deterministic per (seed, stream).
std::vector<long> sample_counts(const Eigen::VectorXd& probs, long n_rep,
                                uint64_t seed, uint64_t stream = 0);

struct SettingRecord {
    cplx beta;
    int n_c = 0;
    long n_rep = 0;
    std::vector<long> counts;  // n = 0..n_c
    long overflow = 0;
    std::vector<double> frequencies;  // exact probabilities when n_rep = 0
};

struct MeasurementRecord {
    BasisSpec basis;
    std::vector<SettingRecord> settings;
    uint64_t seed = 0;

    /// counts/n_rep per bin (exact frequencies in the n_rep = 0 mode).
    std::vector<double> frequencies_of(int setting) const;
};

/// Simulate records for a state: multinomial shot noise per setting with
/// independent RNG streams; n_rep = 0 is the exact-frequency sentinel.
MeasurementRecord simulate_record(const DensityMatrix& rho,
                                  const std::vector<MeasurementSetting>& settings,
                                  long n_rep, uint64_t seed);

/// Fixed-relative-bias noise model: b + eps*||b||*u with u a random unit
/// vector, the premise of the Eq.-style fidelity bound.
Eigen::VectorXd add_relative_bias(const Eigen::VectorXd& b, double eps,
                                  uint64_t seed, uint64_t stream = 0);

}  // namespace cvtomo
