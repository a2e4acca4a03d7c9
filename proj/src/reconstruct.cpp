#include "cvtomo/reconstruct.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace cvtomo {

namespace {
constexpr double kRankThreshold = 1e-10;
constexpr double kProbFloor = 1e-12;
}  // namespace

LinearSystem assemble_system(const MeasurementRecord& record, const BasisSpec& basis) {
    if (record.settings.empty()) throw ConfigError("assemble_system: record has no settings");
    std::vector<MeasurementSetting> settings;
    settings.reserve(record.settings.size());
    int rows = 0;
    for (const auto& s : record.settings) {
        settings.push_back({s.beta, s.n_c});
        rows += s.n_c + 1;
    }
    LinearSystem sys{build_sensing(settings, basis, MeasureMode::Qn), Eigen::VectorXd(rows)};
    int at = 0;
    for (size_t j = 0; j < record.settings.size(); ++j) {
        const std::vector<double> f = record.frequencies_of(int(j));
        for (size_t n = 0; n < f.size(); ++n) sys.b(at++) = f[n];
    }
    return sys;
}

Eigen::MatrixXcd least_squares(const SensingMatrix& A, const Eigen::VectorXd& b) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(A.entries, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double floor = kRankThreshold * sv(0);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > floor) ++rank;
    if (rank < int(A.entries.cols())) throw IncompleteSensingError(rank, int(A.entries.cols()));
    Eigen::VectorXcd x = svd.solve(b.cast<cplx>());
    Eigen::MatrixXcd rho = unvectorize(x);
    return 0.5 * (rho + rho.adjoint().eval());
}

Eigen::VectorXd project_simplex(const Eigen::VectorXd& v) {
    const int n = int(v.size());
    std::vector<double> u(v.data(), v.data() + n);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cumsum = 0.0, tau = 0.0;
    int k = 0;
    for (int i = 0; i < n; ++i) {
        cumsum += u[size_t(i)];
        const double t = (cumsum - 1.0) / (i + 1);
        if (u[size_t(i)] - t > 0.0) {
            tau = t;
            k = i + 1;
        }
    }
    (void)k;
    Eigen::VectorXd out(n);
    for (int i = 0; i < n; ++i) out(i) = std::max(v(i) - tau, 0.0);
    return out;
}

Eigen::MatrixXcd project_physical(const Eigen::MatrixXcd& rho_raw) {
    Eigen::MatrixXcd herm = 0.5 * (rho_raw + rho_raw.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
    Eigen::VectorXd lam = project_simplex(es.eigenvalues());
    return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::MatrixXcd project_physical_coherent(const Eigen::MatrixXcd& coeff,
                                           const std::vector<cplx>& alphas) {
    const int p = int(alphas.size());
    Eigen::MatrixXcd G(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
            G(i, j) = coherent_overlap(alphas[size_t(i)], alphas[size_t(j)]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eg(G);
    Eigen::VectorXd gl = eg.eigenvalues().cwiseMax(1e-14);
    Eigen::MatrixXcd G_half = eg.eigenvectors() * gl.cwiseSqrt().asDiagonal() * eg.eigenvectors().adjoint();
    Eigen::MatrixXcd G_half_inv = eg.eigenvectors() * gl.cwiseSqrt().cwiseInverse().asDiagonal() * eg.eigenvectors().adjoint();
    Eigen::MatrixXcd projected = project_physical(G_half * coeff * G_half);
    return G_half_inv * projected * G_half_inv;
}

FitResult fit_physical(const SensingMatrix& A, const Eigen::VectorXd& b,
                       int max_iters, double tol) {
    const int dim_sq = int(A.entries.cols());
    const int d = int(std::lround(std::sqrt(double(dim_sq))));
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(A.entries);
    const double lipschitz = 2.0 * svd.singularValues()(0) * svd.singularValues()(0);
    const double step = 1.0 / lipschitz;

    auto objective2 = [&](const Eigen::MatrixXcd& sigma) {
        return (A.entries * vectorize(sigma) - b.cast<cplx>()).squaredNorm();
    };
    auto gradient = [&](const Eigen::MatrixXcd& sigma) {
        Eigen::VectorXcd r = A.entries * vectorize(sigma) - b.cast<cplx>();
        Eigen::MatrixXcd g = unvectorize(Eigen::VectorXcd(2.0 * (A.entries.adjoint() * r)));
        return Eigen::MatrixXcd(0.5 * (g + g.adjoint().eval()));
    };

    Eigen::MatrixXcd x = Eigen::MatrixXcd::Identity(d, d) / double(d);
    Eigen::MatrixXcd y = x;
    Eigen::MatrixXcd best = x;
    double fx = objective2(x);
    double f_best = fx;
    double t_momentum = 1.0;
    int it = 0;
    bool converged = false;
    for (; it < max_iters; ++it) {
        Eigen::MatrixXcd x_next = project_physical(y - step * gradient(y));
        double f_next = objective2(x_next);
        if (f_next > fx) {  // monotone restart: drop momentum, step from x
            y = x;
            t_momentum = 1.0;
            x_next = project_physical(x - step * gradient(x));
            f_next = objective2(x_next);
        }
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_momentum * t_momentum));
        y = x_next + ((t_momentum - 1.0) / t_next) * (x_next - x);
        const double gain = fx - f_next;
        x = std::move(x_next);
        fx = f_next;
        t_momentum = t_next;
        if (fx < f_best) {
            f_best = fx;
            best = x;
        }
        if (std::abs(gain) < tol * std::max(f_best, 1e-30) && it > 10) {
            converged = true;
            break;
        }
    }
    FitResult out;
    out.rho = best;
    out.objective = std::sqrt(f_best);
    out.iterations = it;
    out.converged = converged;
    return out;
}

ImleResult imle(const MeasurementRecord& record, int m_c, int max_iters, double tol) {
    if (record.settings.empty()) throw ConfigError("imle: record has no settings");
    const int d = m_c + 1;

    // POVM columns u[m] = <m|D(beta)|n>, so Pi = u u^dag truncated.
    std::vector<Eigen::VectorXcd> povm;
    std::vector<double> freq;
    double grand = 0.0;
    for (const auto& s : record.settings) grand += double(std::max<long>(s.n_rep, 1));
    for (size_t j = 0; j < record.settings.size(); ++j) {
        const auto& s = record.settings[j];
        const std::vector<double> f = record.frequencies_of(int(j));
        const double weight = double(std::max<long>(s.n_rep, 1)) / grand;
        for (int n = 0; n <= s.n_c; ++n) {
            if (f[size_t(n)] <= 0.0) continue;  // empty bins contribute nothing to R
            Eigen::VectorXcd u(d);
            for (int m = 0; m < d; ++m) u(m) = displaced_fock_overlap(m, n, s.beta);
            povm.push_back(std::move(u));
            freq.push_back(f[size_t(n)] * weight);
        }
    }

    auto log_likelihood_of = [&](const Eigen::MatrixXcd& sigma) {
        double ll = 0.0;
        for (size_t k = 0; k < povm.size(); ++k) {
            const double p = std::max(std::real(povm[k].dot(sigma * povm[k])), kProbFloor);
            ll += freq[k] * std::log(p);
        }
        return ll;
    };

    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Identity(d, d) / double(d);
    ImleResult out;
    double ll_prev = -std::numeric_limits<double>::infinity();
    int power = 1;  // over-relaxation exponent, grown while likelihood keeps rising
    for (int it = 0; it < max_iters; ++it) {
        Eigen::MatrixXcd R = Eigen::MatrixXcd::Zero(d, d);
        double ll = 0.0;
        for (size_t k = 0; k < povm.size(); ++k) {
            const double p = std::max(std::real(povm[k].dot(rho * povm[k])), kProbFloor);
            ll += freq[k] * std::log(p);
            R.noalias() += (freq[k] / p) * (povm[k] * povm[k].adjoint());
        }
        out.log_likelihood = ll;
        out.iterations = it;
        if (ll + 1e-12 < ll_prev) out.monotone = false;
        if (it > 0 && ll - ll_prev < tol) {
            out.converged = true;
            break;
        }
        ll_prev = ll;

        // R^p rho R^p shares the R rho R fixed points; accept the largest
        // power that does not lose likelihood, falling back to the plain step
        R = 0.5 * (R + R.adjoint().eval());
        auto plain_step = [&] {
            Eigen::MatrixXcd next = R * rho * R;
            next = 0.5 * (next + next.adjoint().eval());
            return Eigen::MatrixXcd(next / next.trace().real());
        };
        if (power == 1) {
            rho = plain_step();
        } else {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> er(R);
            auto stepped = [&](int p) {
                if (p == 1) return plain_step();
                Eigen::VectorXd lam = er.eigenvalues().cwiseMax(0.0);
                Eigen::VectorXd powed(lam.size());
                for (int i = 0; i < lam.size(); ++i) powed(i) = std::pow(lam(i), double(p));
                Eigen::MatrixXcd rp =
                    er.eigenvectors() * powed.asDiagonal() * er.eigenvectors().adjoint();
                Eigen::MatrixXcd next = rp * rho * rp;
                next = 0.5 * (next + next.adjoint().eval());
                return Eigen::MatrixXcd(next / next.trace().real());
            };
            Eigen::MatrixXcd candidate = stepped(power);
            while (power > 1 && log_likelihood_of(candidate) < ll) {
                power = std::max(1, power / 2);
                candidate = stepped(power);
            }
            rho = std::move(candidate);
        }
        if (power < 256) power *= 2;
    }
    out.rho = std::move(rho);
    return out;
}

namespace {

// Hermitian square root with eigenvalue clipping at zero.
Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * lam.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

double fidelity(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma) {
    Eigen::MatrixXcd s = psd_sqrt(rho);
    Eigen::MatrixXcd m = s * sigma * s;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (m + m.adjoint().eval()),
                                                       Eigen::EigenvaluesOnly);
    double f = 0.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        f += std::sqrt(std::max(es.eigenvalues()(i), 0.0));
    return f;
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.basis.kind == BasisSpec::Kind::Fock && sigma.basis.kind == BasisSpec::Kind::Fock &&
        rho.dim() == sigma.dim())
        return fidelity(rho.entries, sigma.entries);
    const int m_c = std::max(default_ncut(0.0, rho.basis), default_ncut(0.0, sigma.basis));
    return fidelity(rho.to_fock(m_c).entries, sigma.to_fock(m_c).entries);
}

double trace_distance(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma) {
    Eigen::MatrixXcd diff = rho - sigma;
    diff = 0.5 * (diff + diff.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(diff, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double error_bound(double kappa, int r, double rho_norm_f, double rel_noise) {
    return std::max(0.0, 1.0 - 0.5 * kappa * std::sqrt(double(r)) * rho_norm_f * rel_noise);
}

TrilaterationResult trilaterate_alphas(const MeasurementRecord& record, int p_max,
                                       const TrilaterationOptions& opts) {
    if (record.settings.size() < 3)
        throw InsufficientSettingsError("trilaterate_alphas: need at least three settings");

    double beta_max = 0.0;
    for (const auto& s : record.settings) beta_max = std::max(beta_max, std::abs(s.beta));
    // basis radius covers where components may plausibly sit, not just the
    // probed displacements
    const double mu = (beta_max + 2.5) * (beta_max + 2.5);
    const int m_c = int(std::ceil(mu + 6.0 * std::sqrt(mu) + 10.0));

    ImleResult fit = imle(record, m_c, opts.imle_iters, 1e-12);
    const int d = m_c + 1;

    const double hw = beta_max + opts.grid_margin;
    const int gn = opts.grid_n;
    Eigen::MatrixXd q(gn, gn);
    Eigen::VectorXcd coh(d);
    std::vector<double> log_fact(static_cast<size_t>(d));
    for (int m = 0; m < d; ++m) log_fact[size_t(m)] = log_factorial(m);
    for (int iy = 0; iy < gn; ++iy) {
        for (int ix = 0; ix < gn; ++ix) {
            const cplx beta(-hw + 2.0 * hw * ix / (gn - 1), -hw + 2.0 * hw * iy / (gn - 1));
            const double b = std::abs(beta);
            const double lb = (b > 0) ? std::log(b) : -1e30;
            const double ph = std::arg(beta);
            for (int m = 0; m < d; ++m)
                coh(m) = std::polar(std::exp(-0.5 * b * b + m * lb - 0.5 * log_fact[size_t(m)]),
                                    m * ph);
            q(iy, ix) = std::max(std::real(coh.dot(fit.rho * coh)), 0.0);
        }
    }

    const double q_max = q.maxCoeff();
    if (q_max <= 0.0) throw NotACatError("trilaterate_alphas: Husimi map is empty");
    const double floor = opts.peak_rel_threshold * q_max;

    struct Peak {
        cplx pos;
        double height;
    };
    std::vector<Peak> peaks;
    const double cell = 2.0 * hw / (gn - 1);
    for (int iy = 1; iy + 1 < gn; ++iy) {
        for (int ix = 1; ix + 1 < gn; ++ix) {
            const double v = q(iy, ix);
            if (v < floor) continue;
            bool is_max = true;
            for (int dy = -1; dy <= 1 && is_max; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    if (q(iy + dy, ix + dx) > v) {
                        is_max = false;
                        break;
                    }
                }
            if (!is_max) continue;
            // centroid of the 3x3 neighborhood
            double wsum = 0.0, xs = 0.0, ys = 0.0;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    const double w = q(iy + dy, ix + dx);
                    wsum += w;
                    xs += w * (ix + dx);
                    ys += w * (iy + dy);
                }
            const cplx pos(-hw + cell * (xs / wsum), -hw + cell * (ys / wsum));
            peaks.push_back({pos, v});
        }
    }
    if (peaks.empty()) throw NotACatError("trilaterate_alphas: no isolated Husimi peaks");

    std::sort(peaks.begin(), peaks.end(),
              [](const Peak& a, const Peak& b) { return a.height > b.height; });
    std::vector<Peak> merged;
    for (const Peak& p : peaks) {
        bool absorbed = false;
        for (const Peak& m : merged)
            if (std::abs(m.pos - p.pos) < opts.merge_radius) {
                absorbed = true;
                break;
            }
        if (!absorbed) merged.push_back(p);
    }
    if (int(merged.size()) > p_max)
        throw NotACatError("trilaterate_alphas: " + std::to_string(merged.size()) +
                           " population patches; not a " + std::to_string(p_max) +
                           "-component cat");

    // polish each peak: 3x3 centroid re-centering at successively halved pitch
    auto husimi_at = [&](cplx beta) {
        const double b = std::abs(beta);
        const double lb = (b > 0) ? std::log(b) : -1e30;
        const double ph = std::arg(beta);
        for (int m = 0; m < d; ++m)
            coh(m) = std::polar(std::exp(-0.5 * b * b + m * lb - 0.5 * log_fact[size_t(m)]),
                                m * ph);
        return std::max(std::real(coh.dot(fit.rho * coh)), 0.0);
    };
    // log-quadratic subcell fit on the 3x3 stencil; exact for Gaussian
    // peaks of any width, which a plain centroid is not
    for (Peak& p : merged) {
        double pitch = cell;
        for (int round = 0; round < 3; ++round) {
            double L[3][3];
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx)
                    L[dy + 1][dx + 1] =
                        std::log(std::max(husimi_at(p.pos + cplx(dx * pitch, dy * pitch)), 1e-300));
            const double gx = 0.5 * (L[1][2] - L[1][0]);
            const double gy = 0.5 * (L[2][1] - L[0][1]);
            const double hxx = L[1][2] - 2.0 * L[1][1] + L[1][0];
            const double hyy = L[2][1] - 2.0 * L[1][1] + L[0][1];
            const double hxy = 0.25 * (L[2][2] - L[2][0] - L[0][2] + L[0][0]);
            const double det = hxx * hyy - hxy * hxy;
            if (det <= 0.0) break;  // not a proper maximum at this scale
            double dx = -(hyy * gx - hxy * gy) / det;
            double dy = -(hxx * gy - hxy * gx) / det;
            const double step = std::hypot(dx, dy);
            if (step > 1.5) {  // clamp runaway extrapolation
                dx *= 1.5 / step;
                dy *= 1.5 / step;
            }
            p.pos += pitch * cplx(dx, dy);
            pitch *= 0.5;
        }
    }

    TrilaterationResult out;
    for (const Peak& p : merged) out.alphas.push_back(p.pos);
    out.husimi = std::move(q);
    out.grid_halfwidth = hw;
    out.m_c_used = m_c;
    return out;
}

CatPipelineResult cat_pipeline(const MeasurementRecord& record, int p_max,
                               const TrilaterationOptions& opts) {
    TrilaterationResult tri = trilaterate_alphas(record, p_max, opts);
    BasisSpec basis = BasisSpec::coherent(tri.alphas);
    LinearSystem sys = assemble_system(record, basis);
    Eigen::MatrixXcd coeff = least_squares(sys.A, sys.b);
    Eigen::MatrixXcd physical = project_physical_coherent(coeff, tri.alphas);
    CatPipelineResult out;
    out.alphas = tri.alphas;
    out.state.basis = basis;
    out.state.entries = physical;
    out.residual = (sys.A.entries * vectorize(physical) - sys.b.cast<cplx>()).norm();
    return out;
}

}  // namespace cvtomo
