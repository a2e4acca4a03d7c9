#include "cvtomo/sensing.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <limits>

namespace cvtomo {

namespace {

constexpr double kRankThreshold = 1e-10;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct ComponentLayout {
    std::vector<cplx> alphas;  // {0} for Fock
    int m_top;                 // per-component Fock cutoff (0 for coherent)
};

ComponentLayout layout_of(const BasisSpec& basis) {
    switch (basis.kind) {
        case BasisSpec::Kind::Fock: return {{cplx(0.0, 0.0)}, basis.m_c};
        case BasisSpec::Kind::Coherent: return {basis.alphas, 0};
        case BasisSpec::Kind::DisplacedFock: return {basis.alphas, basis.m_c};
    }
    return {{cplx(0.0, 0.0)}, 0};
}

// Overlap table F(n, m) = <n|D(alpha - beta)|m> for n = 0..n_c+1, m = 0..m_top.
Eigen::MatrixXcd overlap_table(cplx gamma, int n_c, int m_top) {
    Eigen::MatrixXcd F(n_c + 2, m_top + 1);
    for (int n = 0; n <= n_c + 1; ++n)
        for (int m = 0; m <= m_top; ++m) F(n, m) = displaced_fock_overlap(n, m, gamma);
    return F;
}

}  // namespace

SettingBlock build_setting_block(const MeasurementSetting& setting, const BasisSpec& basis,
                                 MeasureMode mode, bool with_derivatives) {
    const ComponentLayout lay = layout_of(basis);
    const int p = int(lay.alphas.size());
    const int mw = lay.m_top + 1;           // per-component index width
    const int comp_dim = p * mw;
    const int dim = comp_dim * comp_dim;
    const int n_c = setting.n_c;
    const cplx beta = setting.beta;

    std::vector<Eigen::MatrixXcd> F{size_t(p)};
    for (int i = 0; i < p; ++i) F[size_t(i)] = overlap_table(lay.alphas[size_t(i)] - beta, n_c, lay.m_top);

    // Raw Q_n rows and their beta-derivatives, combined into the requested mode below.
    Eigen::MatrixXcd Q(n_c + 1, dim), Qre, Qim;
    if (with_derivatives) {
        Qre.setZero(n_c + 1, dim);
        Qim.setZero(n_c + 1, dim);
    }

    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            const cplx w = lay.alphas[size_t(i)] - lay.alphas[size_t(j)];
            const double theta = std::imag(std::conj(beta) * w);
            const cplx phase = std::polar(1.0, theta);
            // d theta / d Re(beta) = Im(w); d theta / d Im(beta) = -Re(w)
            const cplx dphase_re = cplx(0.0, std::imag(w)) * phase;
            const cplx dphase_im = cplx(0.0, -std::real(w)) * phase;
            const cplx gi = lay.alphas[size_t(i)] - beta;
            const cplx gj = lay.alphas[size_t(j)] - beta;
            for (int m1 = 0; m1 <= lay.m_top; ++m1) {
                for (int m2 = 0; m2 <= lay.m_top; ++m2) {
                    const int col = (i * mw + m1) * comp_dim + (j * mw + m2);
                    for (int n = 0; n <= n_c; ++n) {
                        const cplx fi = F[size_t(i)](n, m1);
                        const cplx fj = F[size_t(j)](n, m2);
                        Q(n, col) = phase * fi * std::conj(fj);
                        if (!with_derivatives) continue;
                        const double rn = std::sqrt(double(n));
                        const double rn1 = std::sqrt(double(n) + 1.0);
                        const cplx fi_down = (n > 0) ? F[size_t(i)](n - 1, m1) : cplx(0.0);
                        const cplx fj_down = (n > 0) ? F[size_t(j)](n - 1, m2) : cplx(0.0);
                        const cplx fi_up = F[size_t(i)](n + 1, m1);
                        const cplx fj_up = F[size_t(j)](n + 1, m2);
                        // df/dRe(beta) = -sqrt(n) F(n-1) - i Im(g) F(n) + sqrt(n+1) F(n+1)
                        const cplx dfi_re = -rn * fi_down - cplx(0.0, std::imag(gi)) * fi + rn1 * fi_up;
                        const cplx dfj_re = -rn * fj_down - cplx(0.0, std::imag(gj)) * fj + rn1 * fj_up;
                        // df/dIm(beta) = -i sqrt(n) F(n-1) + i Re(g) F(n) - i sqrt(n+1) F(n+1)
                        const cplx dfi_im = cplx(0.0, 1.0) * (-rn * fi_down + std::real(gi) * fi - rn1 * fi_up);
                        const cplx dfj_im = cplx(0.0, 1.0) * (-rn * fj_down + std::real(gj) * fj - rn1 * fj_up);
                        Qre(n, col) = dphase_re * fi * std::conj(fj) +
                                      phase * (dfi_re * std::conj(fj) + fi * std::conj(dfj_re));
                        Qim(n, col) = dphase_im * fi * std::conj(fj) +
                                      phase * (dfi_im * std::conj(fj) + fi * std::conj(dfj_im));
                    }
                }
            }
        }
    }

    SettingBlock block;
    switch (mode) {
        case MeasureMode::Qn:
            block.value = std::move(Q);
            if (with_derivatives) {
                block.d_re = std::move(Qre);
                block.d_im = std::move(Qim);
            }
            break;
        case MeasureMode::Husimi:
            block.value = Q.topRows(1);
            if (with_derivatives) {
                block.d_re = Qre.topRows(1);
                block.d_im = Qim.topRows(1);
            }
            break;
        case MeasureMode::Wigner: {
            Eigen::RowVectorXd signs(n_c + 1);
            for (int n = 0; n <= n_c; ++n) signs(n) = (n % 2 == 0) ? 1.0 : -1.0;
            block.value = signs.cast<cplx>() * Q;
            if (with_derivatives) {
                block.d_re = signs.cast<cplx>() * Qre;
                block.d_im = signs.cast<cplx>() * Qim;
            }
            break;
        }
    }
    return block;
}

SensingMatrix build_sensing(const std::vector<MeasurementSetting>& settings,
                            const BasisSpec& basis, MeasureMode mode) {
    if (settings.empty()) throw ConfigError("build_sensing: settings must be non-empty");
    SensingMatrix A;
    A.settings = settings;
    A.basis = basis;
    A.mode = mode;
    A.row_offsets.assign(1, 0);
    std::vector<Eigen::MatrixXcd> blocks;
    blocks.reserve(settings.size());
    int total_rows = 0;
    for (const auto& s : settings) {
        blocks.push_back(build_setting_block(s, basis, mode, false).value);
        total_rows += int(blocks.back().rows());
        A.row_offsets.push_back(total_rows);
    }
    A.entries.resize(total_rows, basis.dimension());
    for (size_t j = 0; j < blocks.size(); ++j)
        A.entries.middleRows(A.row_offsets[j], blocks[j].rows()) = blocks[j];
    return A;
}

ConditionReport condition_number(const SensingMatrix& A) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(A.entries);
    const auto& sv = svd.singularValues();
    ConditionReport rep;
    rep.sigma_max = sv(0);
    rep.sigma_min = sv(sv.size() - 1);
    const double floor = kRankThreshold * rep.sigma_max;
    rep.rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > floor) ++rep.rank;
    rep.kappa = (rep.rank == int(A.entries.cols())) ? rep.sigma_max / rep.sigma_min : kInf;
    rep.figure_of_merit = rep.kappa * std::sqrt(double(A.settings.size()));
    return rep;
}

ConditionReport condition_number_hermitian(const Eigen::MatrixXcd& C, int n_settings) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(C, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    ConditionReport rep;
    const double lam_max = ev(ev.size() - 1);
    const double lam_min = ev(0);
    rep.sigma_max = std::sqrt(std::max(lam_max, 0.0));
    rep.sigma_min = std::sqrt(std::max(lam_min, 0.0));
    const double floor = kRankThreshold * kRankThreshold * lam_max;
    rep.rank = 0;
    for (int i = 0; i < ev.size(); ++i)
        if (ev(i) > floor) ++rep.rank;
    rep.kappa = (rep.rank == int(C.cols())) ? rep.sigma_max / rep.sigma_min : kInf;
    rep.figure_of_merit = rep.kappa * std::sqrt(double(std::max(n_settings, 1)));
    return rep;
}

CovarianceBlocks covariance(const SensingMatrix& A) {
    CovarianceBlocks cb;
    cb.C = A.entries.adjoint() * A.entries;
    if (A.basis.kind == BasisSpec::Kind::Fock) {
        const int mw = A.basis.m_c + 1;
        cb.block_index.resize(size_t(mw) * size_t(mw));
        for (int m1 = 0; m1 < mw; ++m1)
            for (int m2 = 0; m2 < mw; ++m2) cb.block_index[size_t(m1 * mw + m2)] = m1 - m2;
        cb.has_blocks = true;
    }
    return cb;
}

Eigen::MatrixXcd covariance_of_settings(const std::vector<MeasurementSetting>& settings,
                                        const BasisSpec& basis, MeasureMode mode) {
    const int dim = basis.dimension();
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& s : settings) {
        Eigen::MatrixXcd block = build_setting_block(s, basis, mode, false).value;
        C.noalias() += block.adjoint() * block;
    }
    return C;
}

CovarianceBlocks pinch(const CovarianceBlocks& cb) {
    if (!cb.has_blocks) throw ConfigError("pinch: covariance lacks block indexing (non-Fock basis)");
    CovarianceBlocks out = cb;
    const int n = int(cb.C.rows());
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            if (cb.block_index[size_t(r)] != cb.block_index[size_t(c)]) out.C(r, c) = 0.0;
    return out;
}

double cn_estimate_cat(const std::vector<cplx>& alphas, cplx beta) {
    double total = 0.0;
    for (const cplx& ai : alphas) {
        const double di = std::abs(ai - beta);
        for (const cplx& aj : alphas) {
            const double dj = std::abs(aj - beta);
            total += std::exp(0.5 * (di - dj) * (di - dj));
        }
    }
    return total;
}

CatIcFlags cat_ic_diagnostics(const std::vector<cplx>& alphas, cplx beta,
                              double geom_tol, double suppression_threshold) {
    const int p = int(alphas.size());
    if (p < 2) throw ConfigError("cat_ic_diagnostics: need at least two components");
    CatIcFlags flags;
    std::vector<double> d(static_cast<size_t>(p));
    std::vector<double> phi(static_cast<size_t>(p));
    double scale = 0.0;
    for (int i = 0; i < p; ++i) {
        d[size_t(i)] = std::abs(alphas[size_t(i)] - beta);
        phi[size_t(i)] = std::arg(alphas[size_t(i)] - beta);
        scale = std::max(scale, d[size_t(i)]);
    }
    scale = std::max(scale, 1.0);

    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j) {
            const double gap = d[size_t(i)] - d[size_t(j)];
            if (std::abs(gap) <= geom_tol * scale) flags.on_bisector = true;
            const cplx gi = alphas[size_t(i)] - beta;
            const cplx gj = alphas[size_t(j)] - beta;
            const double cross = std::imag(gi * std::conj(gj));
            if (std::abs(cross) <= geom_tol * scale * scale) flags.collinear = true;
            flags.max_suppression_exponent =
                std::max(flags.max_suppression_exponent, 0.5 * gap * gap);
        }
    }
    flags.suppressed = flags.max_suppression_exponent > suppression_threshold;

    auto wrap = [](double a) {
        while (a > M_PI) a -= 2.0 * M_PI;
        while (a < -M_PI) a += 2.0 * M_PI;
        return std::abs(a);
    };
    for (int i = 0; i < p && !flags.pair_coincidence; ++i)
        for (int j = i + 1; j < p; ++j)
            for (int k = 0; k < p; ++k)
                for (int l = k + 1; l < p; ++l) {
                    if (k == i || k == j || l == i || l == j) continue;
                    if (std::make_pair(k, l) <= std::make_pair(i, j)) continue;
                    const double prod_gap = std::abs(d[size_t(i)] * d[size_t(j)] - d[size_t(k)] * d[size_t(l)]);
                    if (prod_gap > geom_tol * scale * scale) continue;
                    const double a1 = phi[size_t(i)] - phi[size_t(j)];
                    const double a2 = phi[size_t(k)] - phi[size_t(l)];
                    if (wrap(a1 - a2) <= geom_tol || wrap(a1 + a2) <= geom_tol)
                        flags.pair_coincidence = true;
                }
    return flags;
}

Eigen::MatrixXcd homodyne_row(double theta, const std::vector<double>& grid,
                              const BasisSpec& fock_basis) {
    if (fock_basis.kind != BasisSpec::Kind::Fock)
        throw ConfigError("homodyne_row: Fock basis required");
    const int mw = fock_basis.m_c + 1;
    Eigen::MatrixXcd rows(grid.size(), mw * mw);
    std::vector<double> psi(static_cast<size_t>(mw));
    for (size_t g = 0; g < grid.size(); ++g) {
        for (int m = 0; m < mw; ++m) psi[size_t(m)] = oscillator_eigenfunction(m, grid[g]);
        for (int m1 = 0; m1 < mw; ++m1)
            for (int m2 = 0; m2 < mw; ++m2)
                rows(long(g), m1 * mw + m2) =
                    std::polar(psi[size_t(m1)] * psi[size_t(m2)], (m1 - m2) * theta);
    }
    return rows;
}

Eigen::VectorXcd vectorize(const Eigen::MatrixXcd& rho) {
    const int n = int(rho.rows());
    Eigen::VectorXcd v(n * n);
    for (int m1 = 0; m1 < n; ++m1)
        for (int m2 = 0; m2 < n; ++m2) v(m1 * n + m2) = rho(m1, m2);
    return v;
}

Eigen::MatrixXcd unvectorize(const Eigen::VectorXcd& v) {
    const int n = int(std::lround(std::sqrt(double(v.size()))));
    Eigen::MatrixXcd rho(n, n);
    for (int m1 = 0; m1 < n; ++m1)
        for (int m2 = 0; m2 < n; ++m2) rho(m1, m2) = v(m1 * n + m2);
    return rho;
}

}  // namespace cvtomo
