#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "cvtomo/numerics.hpp"

namespace cvtomo {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateSpectrumError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IncompleteSensingError : std::runtime_error {
    int rank;
    int dimension;
    IncompleteSensingError(int r, int d)
        : std::runtime_error("sensing matrix is informationally incomplete: rank " +
                             std::to_string(r) + " < dimension " + std::to_string(d)),
          rank(r), dimension(d) {}
};

struct InvalidDistributionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InsufficientSettingsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotACatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BudgetExceededError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Reconstruction basis: Fock |m1><m2| up to a cutoff, coherent components
/// |a_i><a_j|, or displaced Fock D(a_i)|m1><m2|D(a_j)^dag.
struct BasisSpec {
    enum class Kind { Fock, Coherent, DisplacedFock };

    Kind kind = Kind::Fock;
    int m_c = 0;                // Fock / displaced-Fock per-component cutoff
    std::vector<cplx> alphas;   // coherent / displaced-Fock components

    static BasisSpec fock(int m_c);
    static BasisSpec coherent(std::vector<cplx> alphas);
    static BasisSpec displaced_fock(std::vector<cplx> alphas, int m_c);

    int dimension() const;

    /// Largest phase-space extent of the basis, used by the truncation rule:
    /// sqrt(m_c) for Fock, max|a_i| (+ sqrt(m_c)) otherwise.
    double radius() const;

    bool operator==(const BasisSpec&) const = default;
};

/// One measurement setting: displacement beta with excitation-count cap n_c.
struct MeasurementSetting {
    cplx beta;
    int n_c = 0;
};

/// Truncation rule: ceil(mu + 6 sqrt(mu) + 10) with mu = (|beta| + R)^2,
/// R the basis radius. Keeps the unresolved tail mass under ~1e-8.
int default_ncut(cplx beta, const BasisSpec& basis);

}  // namespace cvtomo
