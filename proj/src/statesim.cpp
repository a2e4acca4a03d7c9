#include "cvtomo/statesim.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "cvtomo/rng.hpp"

namespace cvtomo {

cplx coherent_overlap(cplx a_i, cplx a_j) {
    return std::exp(-0.5 * (std::norm(a_i) + std::norm(a_j)) + std::conj(a_i) * a_j);
}

namespace {

// Fock coefficients of D(alpha)|m> up to cutoff.
Eigen::VectorXcd displaced_fock_vector(cplx alpha, int m, int m_c) {
    Eigen::VectorXcd v(m_c + 1);
    for (int k = 0; k <= m_c; ++k) v(k) = displaced_fock_overlap(k, m, alpha);
    return v;
}

}  // namespace

DensityMatrix DensityMatrix::to_fock(int m_c) const {
    if (basis.kind == BasisSpec::Kind::Fock) {
        DensityMatrix out;
        out.basis = BasisSpec::fock(m_c);
        out.entries = Eigen::MatrixXcd::Zero(m_c + 1, m_c + 1);
        const int copy = std::min(m_c + 1, dim());
        out.entries.topLeftCorner(copy, copy) = entries.topLeftCorner(copy, copy);
        return out;
    }
    const int p = int(basis.alphas.size());
    const int mw = (basis.kind == BasisSpec::Kind::DisplacedFock) ? basis.m_c + 1 : 1;
    std::vector<Eigen::VectorXcd> kets;
    kets.reserve(size_t(p) * size_t(mw));
    for (int i = 0; i < p; ++i)
        for (int m = 0; m < mw; ++m)
            kets.push_back(displaced_fock_vector(basis.alphas[size_t(i)], m, m_c));
    DensityMatrix out;
    out.basis = BasisSpec::fock(m_c);
    out.entries = Eigen::MatrixXcd::Zero(m_c + 1, m_c + 1);
    const int comp = p * mw;
    for (int I = 0; I < comp; ++I)
        for (int J = 0; J < comp; ++J)
            out.entries.noalias() += entries(I, J) * kets[size_t(I)] * kets[size_t(J)].adjoint();
    return out;
}

double DensityMatrix::purity() const {
    if (basis.kind == BasisSpec::Kind::Fock) return (entries * entries).trace().real();
    // Non-orthogonal components: tr(rho^2) = tr(cGcG) with G the Gram matrix.
    const int p = int(basis.alphas.size());
    if (basis.kind == BasisSpec::Kind::Coherent) {
        Eigen::MatrixXcd G(p, p);
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j)
                G(i, j) = coherent_overlap(basis.alphas[size_t(i)], basis.alphas[size_t(j)]);
        return (entries * G * entries * G).trace().real();
    }
    const int m_c = default_ncut(0.0, basis);
    DensityMatrix f = to_fock(m_c);
    return (f.entries * f.entries).trace().real();
}

DensityMatrix random_density(int m_c, double purity_knob, uint64_t seed) {
    const int d = m_c + 1;
    Philox rng(seed, Philox::mix(0x647374, seed));
    Eigen::MatrixXcd G(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) G(r, c) = cplx(rng.normal(), rng.normal());
    Eigen::MatrixXcd mixed = G * G.adjoint();
    mixed /= mixed.trace().real();
    Eigen::VectorXcd psi(d);
    for (int r = 0; r < d; ++r) psi(r) = cplx(rng.normal(), rng.normal());
    psi.normalize();
    DensityMatrix rho;
    rho.basis = BasisSpec::fock(m_c);
    rho.entries = (1.0 - purity_knob) * mixed + purity_knob * (psi * psi.adjoint());
    rho.entries = 0.5 * (rho.entries + rho.entries.adjoint().eval());
    return rho;
}

DensityMatrix cat_density(const std::vector<cplx>& alphas, const Eigen::MatrixXcd& coefficients) {
    const int p = int(alphas.size());
    if (coefficients.rows() != p || coefficients.cols() != p)
        throw ConfigError("cat_density: coefficient matrix must be p x p");
    if ((coefficients - coefficients.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw ConfigError("cat_density: coefficient matrix must be Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(coefficients, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < -1e-10 * std::abs(es.eigenvalues()(p - 1)))
        throw ConfigError("cat_density: coefficient matrix must be PSD");
    cplx z = 0.0;
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
            z += coefficients(i, j) * coherent_overlap(alphas[size_t(j)], alphas[size_t(i)]);
    DensityMatrix rho;
    rho.basis = BasisSpec::coherent(alphas);
    rho.entries = coefficients / z.real();
    return rho;
}

Eigen::VectorXd exact_qn(const DensityMatrix& rho, const MeasurementSetting& setting) {
    SensingMatrix A = build_sensing({setting}, rho.basis, MeasureMode::Qn);
    Eigen::VectorXcd q = A.entries * vectorize(rho.entries);
    Eigen::VectorXd probs(setting.n_c + 2);
    double total = 0.0;
    for (int n = 0; n <= setting.n_c; ++n) {
        probs(n) = q(n).real();
        total += probs(n);
    }
    probs(setting.n_c + 1) = 1.0 - total;  // overflow = complement
    return probs;
}

std::vector<long> sample_counts(const Eigen::VectorXd& probs, long n_rep,
                                uint64_t seed, uint64_t stream) {
    const int bins = int(probs.size());
    double total = 0.0;
    for (int i = 0; i < bins; ++i) {
        if (probs(i) < -1e-12)
            throw InvalidDistributionError("sample_counts: negative probability");
        total += std::max(probs(i), 0.0);
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw InvalidDistributionError("sample_counts: probabilities must sum to 1");
    std::vector<double> cdf(static_cast<size_t>(bins));
    double running = 0.0;
    for (int i = 0; i < bins; ++i) {
        running += std::max(probs(i), 0.0) / total;
        cdf[size_t(i)] = running;
    }
    cdf[size_t(bins - 1)] = 1.0;
    std::vector<long> counts(size_t(bins), 0);
    Philox rng(seed, stream);
    for (long r = 0; r < n_rep; ++r) {
        const double u = rng.uniform();
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        ++counts[size_t(it - cdf.begin())];
    }
    return counts;
}

std::vector<double> MeasurementRecord::frequencies_of(int setting) const {
    const SettingRecord& s = settings[size_t(setting)];
    if (s.n_rep == 0) return s.frequencies;
    std::vector<double> f(s.counts.size());
    for (size_t i = 0; i < s.counts.size(); ++i) f[i] = double(s.counts[i]) / double(s.n_rep);
    return f;
}

MeasurementRecord simulate_record(const DensityMatrix& rho,
                                  const std::vector<MeasurementSetting>& settings,
                                  long n_rep, uint64_t seed) {
    MeasurementRecord rec;
    rec.basis = rho.basis;
    rec.seed = seed;
    rec.settings.resize(settings.size());
    for (size_t j = 0; j < settings.size(); ++j) {
        const MeasurementSetting& s = settings[j];
        SettingRecord& out = rec.settings[j];
        out.beta = s.beta;
        out.n_c = s.n_c;
        out.n_rep = n_rep;
        Eigen::VectorXd probs = exact_qn(rho, s);
        if (n_rep == 0) {
            out.frequencies.assign(probs.data(), probs.data() + s.n_c + 1);
            out.counts.assign(size_t(s.n_c) + 1, 0);
            out.overflow = 0;
        } else {
            std::vector<long> counts = sample_counts(probs, n_rep, seed, Philox::mix(j, seed));
            out.overflow = counts.back();
            counts.pop_back();
            out.counts = std::move(counts);
        }
    }
    return rec;
}

Eigen::VectorXd add_relative_bias(const Eigen::VectorXd& b, double eps,
                                  uint64_t seed, uint64_t stream) {
    Philox rng(seed, stream);
    Eigen::VectorXd u(b.size());
    for (int i = 0; i < b.size(); ++i) u(i) = rng.normal();
    u.normalize();
    return b + eps * b.norm() * u;
}

}  // namespace cvtomo
