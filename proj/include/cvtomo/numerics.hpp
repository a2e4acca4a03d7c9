#pragma once

#include <complex>

namespace cvtomo {

using cplx = std::complex<double>;

/// A real number kept as log-magnitude plus sign, so that factorial/power
/// products can be assembled in the log domain and exponentiated once.
struct LogSigned {
    double log_abs;  // ln|value|; -inf encodes exact zero
    int sign;        // -1, 0, +1

    double value() const;
    static LogSigned zero();
    static LogSigned from(double v);
};

LogSigned operator*(const LogSigned& a, const LogSigned& b);

/// ln(n!) with relative error below 1e-13 for n up to 1e6.
double log_factorial(long n);

/// Associated Laguerre polynomial L_m^k(x). The upper index k may be any
/// integer (it arises as n-m with n < m); the lower index m must be >= 0.
/// Uses the explicit finite sum for m <= 30 and the three-term upward
/// recurrence in m beyond that.
double assoc_laguerre(int m, int k, double x);

/// Same value in log-signed form; stays finite for m <= 512, |x| <= 1e4
/// even where the plain double value would overflow.
LogSigned assoc_laguerre_scaled(int m, int k, double x);

/// Overlap <n|D(gamma)|m> of Fock states under a displacement, exact for all
/// n, m >= 0. Magnitudes are assembled in the log domain; the value is a
/// unitary matrix element so |result| <= 1.
cplx displaced_fock_overlap(int n, int m, cplx gamma);

/// Sensing-matrix entry Q_n^beta(|m1><m2|): probability amplitude product
/// <n|D(-beta)|m1><m2|D(-beta)^dag|n>. At beta = 0 (within 1e-12) the
/// analytic limit delta(n,m1) delta(n,m2) is returned.
cplx qn_fock_element(int n, cplx beta, int m1, int m2);

/// Coherent-basis entry Q_n^beta(|a_i><a_j|), including the geometric phase
/// and the exp(-(d_i-d_j)^2/2) exp(-d_i d_j) damping factors.
cplx qn_coherent_element(int n, cplx beta, cplx alpha_i, cplx alpha_j);

/// Displaced-Fock-basis entry Q_n^beta(D(a_i)|m1><m2|D(a_j)^dag).
cplx qn_displaced_fock_element(int n, cplx beta, cplx alpha_i, int m1,
                               cplx alpha_j, int m2);

/// Physicists' Hermite polynomial H_m(x) by three-term recurrence.
double hermite_phys(int m, double x);

/// Harmonic-oscillator position eigenfunction psi_m(x) =
/// H_m(x) e^{-x^2/2} / sqrt(2^m m! sqrt(pi)), by stable recurrence.
double oscillator_eigenfunction(int m, double x);

}  // namespace cvtomo
