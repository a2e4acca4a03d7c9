#include "cvtomo/design.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "cvtomo/parallel.hpp"
#include "cvtomo/rng.hpp"

namespace cvtomo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDegenerateGap = 1e-8;

double golden_minimize(const std::function<double(double)>& f, double a, double b,
                       double tol) {
    const double phi = 0.6180339887498949;
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

int uniform_ncut(const std::vector<MeasurementSetting>& settings, const BasisSpec& basis) {
    int n_c = 0;
    for (const auto& s : settings) n_c = std::max(n_c, default_ncut(s.beta, basis));
    return n_c;
}

struct EigenPair {
    double lam_min, lam_max;
    Eigen::VectorXcd v_min, v_max;
    double gap_min, gap_max;  // relative to lam_max
};

EigenPair extreme_eigenpairs(const Eigen::MatrixXcd& C) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(C);
    const auto& ev = es.eigenvalues();
    const int n = int(ev.size());
    EigenPair out;
    out.lam_min = ev(0);
    out.lam_max = ev(n - 1);
    out.v_min = es.eigenvectors().col(0);
    out.v_max = es.eigenvectors().col(n - 1);
    out.gap_min = (n > 1) ? (ev(1) - ev(0)) / ev(n - 1) : kInf;
    out.gap_max = (n > 1) ? (ev(n - 1) - ev(n - 2)) / ev(n - 1) : kInf;
    return out;
}

}  // namespace

std::vector<MeasurementSetting> ring_settings(RingFamily family, int m_c, double radius) {
    if (radius <= 0.0) throw ConfigError("ring_settings: radius must be positive");
    const BasisSpec basis = BasisSpec::fock(m_c);
    const int count = (family == RingFamily::FRC) ? 2 * m_c + 1 : m_c + 1;
    const double step = (family == RingFamily::FRC) ? 2.0 * M_PI / (2 * m_c + 1)
                                                    : M_PI / (m_c + 1);
    std::vector<MeasurementSetting> settings(static_cast<size_t>(count));
    for (int j = 0; j < count; ++j) {
        settings[size_t(j)].beta = std::polar(radius, step * j);
        settings[size_t(j)].n_c = default_ncut(settings[size_t(j)].beta, basis);
    }
    return settings;
}

std::vector<RadiusScanPoint> radius_scan(RingFamily family, int m_c,
                                         const std::vector<double>& radii) {
    if (radii.empty()) throw ConfigError("radius_scan: empty radius grid");
    std::vector<RadiusScanPoint> curve(radii.size());
    const BasisSpec basis = BasisSpec::fock(m_c);
    parallel_for(int(radii.size()), [&](int i) {
        auto settings = ring_settings(family, m_c, radii[size_t(i)]);
        Eigen::MatrixXcd C = covariance_of_settings(settings, basis);
        ConditionReport rep = condition_number_hermitian(C, int(settings.size()));
        curve[size_t(i)] = {radii[size_t(i)], rep.kappa, rep.figure_of_merit};
    });
    return curve;
}

std::pair<double, double> optimal_ring_radius(RingFamily family, int m_c,
                                              double lo, double hi) {
    const BasisSpec basis = BasisSpec::fock(m_c);
    auto kappa_at = [&](double r) {
        auto settings = ring_settings(family, m_c, r);
        Eigen::MatrixXcd C = covariance_of_settings(settings, basis);
        return condition_number_hermitian(C, int(settings.size())).kappa;
    };
    double best_r = lo, best_k = kInf;
    const int coarse = 47;
    std::vector<double> ks(coarse);
    std::vector<double> rs(coarse);
    for (int i = 0; i < coarse; ++i) rs[size_t(i)] = lo + (hi - lo) * i / (coarse - 1);
    parallel_for(coarse, [&](int i) { ks[size_t(i)] = kappa_at(rs[size_t(i)]); });
    int best_i = 0;
    for (int i = 0; i < coarse; ++i)
        if (ks[size_t(i)] < ks[size_t(best_i)]) best_i = i;
    const double a = rs[size_t(std::max(best_i - 1, 0))];
    const double b = rs[size_t(std::min(best_i + 1, coarse - 1))];
    best_r = golden_minimize(kappa_at, a, b, 1e-5);
    best_k = kappa_at(best_r);
    return {best_r, best_k};
}

double kappa_c_of(const std::vector<MeasurementSetting>& settings, const BasisSpec& basis,
                  MeasureMode mode) {
    Eigen::MatrixXcd C = covariance_of_settings(settings, basis, mode);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(C, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    if (ev(0) <= 0.0) return kInf;
    return ev(ev.size() - 1) / ev(0);
}

std::vector<std::array<double, 2>> cn_gradient(const std::vector<MeasurementSetting>& settings,
                                               const BasisSpec& basis, MeasureMode mode) {
    const size_t n_set = settings.size();
    std::vector<SettingBlock> blocks(n_set);
    for (size_t j = 0; j < n_set; ++j)
        blocks[j] = build_setting_block(settings[j], basis, mode, true);

    const int dim = basis.dimension();
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& b : blocks) C.noalias() += b.value.adjoint() * b.value;

    EigenPair ep = extreme_eigenpairs(C);
    if (ep.lam_min <= 0.0)
        throw DegenerateSpectrumError("cn_gradient: covariance is singular (kappa infinite)");
    if (ep.gap_min < kDegenerateGap || ep.gap_max < kDegenerateGap)
        throw DegenerateSpectrumError("cn_gradient: extreme eigenvalue gap below 1e-8 of lambda_max");

    std::vector<std::array<double, 2>> grad(n_set);
    for (size_t j = 0; j < n_set; ++j) {
        const Eigen::VectorXcd a_max = blocks[j].value * ep.v_max;
        const Eigen::VectorXcd a_min = blocks[j].value * ep.v_min;
        for (int part = 0; part < 2; ++part) {
            const Eigen::MatrixXcd& B = (part == 0) ? blocks[j].d_re : blocks[j].d_im;
            // d lambda_k = v_k^dag (B^dag A + A^dag B) v_k = 2 Re[(B v_k)^dag (A v_k)]
            const double d_max = 2.0 * (B * ep.v_max).dot(a_max).real();
            const double d_min = 2.0 * (B * ep.v_min).dot(a_min).real();
            grad[j][size_t(part)] =
                (d_max * ep.lam_min - ep.lam_max * d_min) / (ep.lam_min * ep.lam_min);
        }
    }
    return grad;
}

DesignReport optimize_settings(const std::vector<MeasurementSetting>& initial,
                               const BasisSpec& basis, const OptimizeOptions& opts) {
    if (initial.empty()) throw ConfigError("optimize_settings: empty initial configuration");
    std::vector<MeasurementSetting> cur = initial;
    auto refresh_ncut = [&](std::vector<MeasurementSetting>& s) {
        const int n_c = uniform_ncut(s, basis);
        for (auto& st : s) st.n_c = n_c;
    };
    refresh_ncut(cur);

    DesignReport report;
    report.basis = basis;
    double kc = kappa_c_of(cur, basis, opts.mode);
    report.history.emplace_back(0, std::sqrt(kc));

    Philox jitter_rng(0x6f7074, 1);
    bool converged = false;
    for (int iter = 1; iter <= opts.max_iters; ++iter) {
        std::vector<std::array<double, 2>> grad;
        try {
            grad = cn_gradient(cur, basis, opts.mode);
        } catch (const DegenerateSpectrumError&) {
            // measure-zero degeneracy: jitter once and retry
            for (auto& s : cur)
                s.beta += 1e-7 * cplx(jitter_rng.normal(), jitter_rng.normal());
            refresh_ncut(cur);
            kc = kappa_c_of(cur, basis, opts.mode);
            grad = cn_gradient(cur, basis, opts.mode);
        }
        double g_norm2 = 0.0, g_inf = 0.0;
        for (const auto& g : grad) {
            g_norm2 += g[0] * g[0] + g[1] * g[1];
            g_inf = std::max({g_inf, std::abs(g[0]), std::abs(g[1])});
        }
        if (g_inf < 1e-14) {
            converged = true;
            break;
        }
        double t = 0.5 / g_inf;  // first trial moves the largest beta by 0.5
        bool accepted = false;
        for (int back = 0; back < 60; ++back) {
            std::vector<MeasurementSetting> cand = cur;
            for (size_t j = 0; j < cand.size(); ++j)
                cand[j].beta -= t * cplx(grad[j][0], grad[j][1]);
            refresh_ncut(cand);
            const double kc_cand = kappa_c_of(cand, basis, opts.mode);
            if (kc_cand <= kc - opts.armijo_c * t * g_norm2) {
                const double rel_gain = (kc - kc_cand) / kc;
                cur = std::move(cand);
                kc = kc_cand;
                report.history.emplace_back(iter, std::sqrt(kc));
                accepted = true;
                if (rel_gain < opts.tol) converged = true;
                break;
            }
            t *= opts.shrink;
        }
        if (!accepted || converged) {
            converged = true;
            break;
        }
    }
    report.settings = cur;
    report.converged = converged;
    report.condition = condition_number(build_sensing(cur, basis, opts.mode));
    return report;
}

namespace {

// kappa(A) of C_prev plus the candidate block, by the covariance path.
double kappa_with(const Eigen::MatrixXcd& C_prev, const Eigen::MatrixXcd& block) {
    Eigen::MatrixXcd C = C_prev + block.adjoint() * block;
    return condition_number_hermitian(C, 1).kappa;
}

}  // namespace

DesignReport greedy_select(const std::vector<cplx>& alphas, int m_c_target,
                           double kappa_threshold, const GreedyOptions& opts) {
    if (kappa_threshold <= 1.0) throw ConfigError("greedy_select: threshold must exceed 1");
    if (m_c_target < 0) throw ConfigError("greedy_select: m_c_target must be >= 0");

    double a_max = 0.0;
    for (const cplx& a : alphas) a_max = std::max(a_max, std::abs(a));
    const double hw = a_max + opts.grid_margin;

    int m_c = 0;
    BasisSpec basis = BasisSpec::displaced_fock(alphas, m_c);
    std::vector<MeasurementSetting> chosen;
    Eigen::MatrixXcd C_prev = Eigen::MatrixXcd::Zero(basis.dimension(), basis.dimension());

    DesignReport report;
    int step = 0;
    while (true) {
        if (int(chosen.size()) >= opts.beta_budget) {
            DesignReport partial = report;
            partial.basis = basis;
            partial.settings = chosen;
            if (!chosen.empty())
                partial.condition = condition_number(build_sensing(chosen, basis, MeasureMode::Qn));
            throw GreedyBudgetError(
                "greedy_select: beta budget exhausted before reaching threshold at target m_c",
                std::move(partial));
        }

        // grid search for the next beta
        const int gn = opts.grid_n;
        std::vector<double> best_per_row(size_t(gn), kInf);
        std::vector<cplx> best_beta_row(static_cast<size_t>(gn));
        parallel_for(gn, [&](int iy) {
            for (int ix = 0; ix < gn; ++ix) {
                const cplx beta(-hw + 2.0 * hw * ix / (gn - 1), -hw + 2.0 * hw * iy / (gn - 1));
                MeasurementSetting s{beta, default_ncut(beta, basis)};
                Eigen::MatrixXcd block = build_setting_block(s, basis, MeasureMode::Qn, false).value;
                const double k = kappa_with(C_prev, block);
                if (k < best_per_row[size_t(iy)]) {
                    best_per_row[size_t(iy)] = k;
                    best_beta_row[size_t(iy)] = beta;
                }
            }
        });
        int best_row = 0;
        for (int iy = 0; iy < gn; ++iy)
            if (best_per_row[size_t(iy)] < best_per_row[size_t(best_row)]) best_row = iy;
        cplx beta = best_beta_row[size_t(best_row)];
        double kappa = best_per_row[size_t(best_row)];

        // local refinement: descent over the new beta only
        auto kappa_at = [&](cplx b) {
            MeasurementSetting s{b, default_ncut(b, basis)};
            Eigen::MatrixXcd block = build_setting_block(s, basis, MeasureMode::Qn, false).value;
            return kappa_with(C_prev, block);
        };
        for (int it = 0; it < opts.descent_steps; ++it) {
            MeasurementSetting s{beta, default_ncut(beta, basis)};
            SettingBlock blk = build_setting_block(s, basis, MeasureMode::Qn, true);
            Eigen::MatrixXcd C = C_prev + blk.value.adjoint() * blk.value;
            EigenPair ep = extreme_eigenpairs(C);
            if (ep.lam_min <= 0.0 || ep.gap_min < kDegenerateGap || ep.gap_max < kDegenerateGap)
                break;
            const Eigen::VectorXcd a_max = blk.value * ep.v_max;
            const Eigen::VectorXcd a_min = blk.value * ep.v_min;
            double g[2];
            for (int part = 0; part < 2; ++part) {
                const Eigen::MatrixXcd& B = (part == 0) ? blk.d_re : blk.d_im;
                const double d_max = 2.0 * (B * ep.v_max).dot(a_max).real();
                const double d_min = 2.0 * (B * ep.v_min).dot(a_min).real();
                // descend kappa(A) = sqrt(kappa(C)); same direction as kappa(C)
                g[part] = (d_max * ep.lam_min - ep.lam_max * d_min) / (ep.lam_min * ep.lam_min);
            }
            const double g_inf = std::max(std::abs(g[0]), std::abs(g[1]));
            if (g_inf < 1e-12) break;
            double t = 0.2 / g_inf;
            bool moved = false;
            for (int back = 0; back < 30; ++back) {
                const cplx cand = beta - t * cplx(g[0], g[1]);
                const double k_cand = kappa_at(cand);
                if (k_cand < kappa) {
                    beta = cand;
                    kappa = k_cand;
                    moved = true;
                    break;
                }
                t *= 0.5;
            }
            if (!moved) break;
        }

        MeasurementSetting picked{beta, default_ncut(beta, basis)};
        Eigen::MatrixXcd block = build_setting_block(picked, basis, MeasureMode::Qn, false).value;
        C_prev += block.adjoint() * block;
        chosen.push_back(picked);
        ++step;
        report.history.emplace_back(step, kappa);

        if (kappa < kappa_threshold) {
            if (m_c == m_c_target) break;
            ++m_c;
            basis = BasisSpec::displaced_fock(alphas, m_c);
            for (auto& s : chosen) s.n_c = default_ncut(s.beta, basis);
            C_prev = covariance_of_settings(chosen, basis);
        }
    }

    report.basis = basis;
    report.settings = chosen;
    report.condition = condition_number(build_sensing(chosen, basis, MeasureMode::Qn));
    report.converged = true;
    return report;
}

MfrcResult mfrc_compare(int m_c, const std::vector<double>& radii_grid) {
    if (m_c < 1) throw ConfigError("mfrc_compare: m_c must be >= 1");
    if (radii_grid.size() < 3) throw ConfigError("mfrc_compare: need a radius grid");
    const BasisSpec basis = BasisSpec::fock(m_c);
    const double r_lo = radii_grid.front();
    const double r_hi = radii_grid.back();

    auto ring_cov = [&](double r) {
        return covariance_of_settings(ring_settings(RingFamily::FRC, m_c, r), basis);
    };
    auto kappa_of_cov = [&](const Eigen::MatrixXcd& C) {
        return condition_number_hermitian(C, 1).kappa;
    };

    const int g = int(radii_grid.size());
    std::vector<Eigen::MatrixXcd> covs{size_t(g)};
    parallel_for(g, [&](int i) { covs[size_t(i)] = ring_cov(radii_grid[size_t(i)]); });

    // single ring: grid argmin then golden refinement in the bracketing cell
    int best_i = 0;
    std::vector<double> single_k(static_cast<size_t>(g));
    for (int i = 0; i < g; ++i) {
        single_k[size_t(i)] = kappa_of_cov(covs[size_t(i)]);
        if (single_k[size_t(i)] < single_k[size_t(best_i)]) best_i = i;
    }
    auto kappa_single_at = [&](double r) { return kappa_of_cov(ring_cov(r)); };
    const double lo1 = radii_grid[size_t(std::max(best_i - 1, 0))];
    const double hi1 = radii_grid[size_t(std::min(best_i + 1, g - 1))];
    MfrcResult out;
    out.r_single = golden_minimize(kappa_single_at, lo1, hi1, 1e-6);
    out.kappa_single = kappa_single_at(out.r_single);
    if (single_k[size_t(best_i)] < out.kappa_single) {
        out.kappa_single = single_k[size_t(best_i)];
        out.r_single = radii_grid[size_t(best_i)];
    }

    // double ring: argmin over grid pairs of the precomputed covariances,
    // then coordinate golden refinement bounded to the grid's domain
    int bi = 0, bj = 0;
    double best_pair = kInf;
    for (int i = 0; i < g; ++i)
        for (int j = i; j < g; ++j) {
            const double k = kappa_of_cov(covs[size_t(i)] + covs[size_t(j)]);
            if (k < best_pair) {
                best_pair = k;
                bi = i;
                bj = j;
            }
        }
    double r1 = radii_grid[size_t(bi)], r2 = radii_grid[size_t(bj)];
    double span = (r_hi - r_lo) / double(g - 1);
    for (int sweep = 0; sweep < 4; ++sweep) {
        Eigen::MatrixXcd C2 = ring_cov(r2);
        r1 = golden_minimize([&](double r) { return kappa_of_cov(ring_cov(r) + C2); },
                             std::max(r1 - span, r_lo), std::min(r1 + span, r_hi), 1e-6);
        Eigen::MatrixXcd C1 = ring_cov(r1);
        r2 = golden_minimize([&](double r) { return kappa_of_cov(C1 + ring_cov(r)); },
                             std::max(r2 - span, r_lo), std::min(r2 + span, r_hi), 1e-6);
    }
    const double refined = kappa_of_cov(ring_cov(r1) + ring_cov(r2));
    if (refined <= best_pair) {
        out.r1 = r1;
        out.r2 = r2;
        out.kappa_double = refined;
    } else {
        out.r1 = radii_grid[size_t(bi)];
        out.r2 = radii_grid[size_t(bj)];
        out.kappa_double = best_pair;
    }
    if (out.kappa_double > out.kappa_single) {  // equal radii is always admissible
        out.kappa_double = out.kappa_single;
        out.r1 = out.r2 = out.r_single;
    }
    out.improvement = (out.kappa_single - out.kappa_double) / out.kappa_single;
    const double kc_single = out.kappa_single * out.kappa_single;
    const double kc_double = out.kappa_double * out.kappa_double;
    out.improvement_kappa_c = (kc_single - kc_double) / kc_single;
    return out;
}

}  // namespace cvtomo
