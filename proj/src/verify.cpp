#include "cvtomo/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cvtomo/asymptotics.hpp"
#include "cvtomo/design.hpp"
#include "cvtomo/reconstruct.hpp"
#include "cvtomo/rng.hpp"
#include "cvtomo/statesim.hpp"

namespace cvtomo {

CheckResult check_gradient(int n_configs, uint64_t seed) {
    Philox rng(seed, 0);
    double worst = 0.0;
    int done = 0;
    while (done < n_configs) {
        const int m_c = 1 + int(rng.next_u32() % 3);  // 1..3
        const int n_beta = m_c + 1 + int(rng.next_u32() % 2);
        const BasisSpec basis = BasisSpec::fock(m_c);
        std::vector<MeasurementSetting> settings(static_cast<size_t>(n_beta));
        double b_max = 0.0;
        for (auto& s : settings) {
            const double r = 1.0 + 2.5 * rng.uniform();
            s.beta = std::polar(r, 2.0 * M_PI * rng.uniform());
            b_max = std::max(b_max, r);
        }
        const int n_c = default_ncut(std::polar(b_max + 0.1, 0.0), basis);
        for (auto& s : settings) s.n_c = n_c;

        std::vector<std::array<double, 2>> grad;
        try {
            grad = cn_gradient(settings, basis);
        } catch (const DegenerateSpectrumError&) {
            continue;  // measure-zero draw, resample
        }
        const double h = 1e-5;
        double num2 = 0.0, den2 = 0.0;
        for (size_t j = 0; j < settings.size(); ++j) {
            for (int part = 0; part < 2; ++part) {
                auto shifted = settings;
                const cplx dz = (part == 0) ? cplx(h, 0.0) : cplx(0.0, h);
                shifted[j].beta += dz;
                const double kp = kappa_c_of(shifted, basis);
                shifted[j].beta -= 2.0 * dz;
                const double km = kappa_c_of(shifted, basis);
                const double fd = (kp - km) / (2.0 * h);
                num2 += (grad[j][size_t(part)] - fd) * (grad[j][size_t(part)] - fd);
                den2 += fd * fd;
            }
        }
        worst = std::max(worst, std::sqrt(num2 / den2));
        ++done;
    }
    CheckResult res;
    res.name = "gradient_vs_finite_differences";
    res.value = worst;
    res.threshold = 1e-5;
    res.pass = worst < res.threshold;
    std::ostringstream d;
    d << n_configs << " random configurations, worst relative error " << worst;
    res.detail = d.str();
    return res;
}

CheckResult check_projection_lemma(int trials, uint64_t seed) {
    Philox rng(seed, 0);
    double worst_margin = -1.0;  // max of ||tau-rho|| - ||rho'-rho||
    for (int t = 0; t < trials; ++t) {
        const int m_c = 1 + int(rng.next_u32() % 4);
        const int d = m_c + 1;
        DensityMatrix rho = random_density(m_c, rng.uniform(), seed * 1000 + uint64_t(t));
        Eigen::MatrixXcd noise(d, d);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) noise(r, c) = cplx(rng.normal(), rng.normal());
        noise = 0.5 * (noise + noise.adjoint().eval());
        const double eps = std::pow(10.0, -3.0 + 3.0 * rng.uniform());  // 1e-3 .. 1
        Eigen::MatrixXcd rho_prime = rho.entries + eps * noise / noise.norm();
        Eigen::MatrixXcd tau = project_physical(rho_prime);
        const double d_tau = (tau - rho.entries).norm();
        const double d_prime = (rho_prime - rho.entries).norm();
        worst_margin = std::max(worst_margin, d_tau - d_prime);
    }
    CheckResult res;
    res.name = "projection_lemma";
    res.value = worst_margin;
    res.threshold = 1e-12;
    res.pass = worst_margin <= res.threshold;
    std::ostringstream d;
    d << trials << " noisy trials, worst ||tau-rho|| - ||rho'-rho|| = " << worst_margin;
    res.detail = d.str();
    return res;
}

CheckResult check_pinching(int trials, uint64_t seed) {
    Philox rng(seed, 0);
    double worst_ratio = 0.0;  // max kappa(pinched)/kappa(C)
    for (int t = 0; t < trials; ++t) {
        const int m_c = 1 + int(rng.next_u32() % 3);
        const int n_beta = m_c + 1 + int(rng.next_u32() % (m_c + 2));
        const BasisSpec basis = BasisSpec::fock(m_c);
        std::vector<MeasurementSetting> settings(static_cast<size_t>(n_beta));
        for (auto& s : settings) {
            s.beta = std::polar(0.5 + 3.5 * rng.uniform(), 2.0 * M_PI * rng.uniform());
            s.n_c = default_ncut(s.beta, basis);
        }
        CovarianceBlocks cb = covariance(build_sensing(settings, basis));
        CovarianceBlocks pinched = pinch(cb);
        const double k_full = condition_number_hermitian(cb.C, n_beta).kappa;
        const double k_pinch = condition_number_hermitian(pinched.C, n_beta).kappa;
        if (!std::isfinite(k_full)) continue;  // rank-deficient draw: bound is trivial
        worst_ratio = std::max(worst_ratio, k_pinch / k_full);
    }
    CheckResult res;
    res.name = "pinching_inequality";
    res.value = worst_ratio;
    res.threshold = 1.0 + 1e-12;
    res.pass = worst_ratio <= res.threshold;
    std::ostringstream d;
    d << trials << " random setting sets, worst kappa ratio " << worst_ratio;
    res.detail = d.str();
    return res;
}

CheckResult check_parity_scaling(int m_c, double slope_tol) {
    std::vector<double> radii;
    for (double r = 4.0; r <= 12.0 + 1e-9; r += 1.0) radii.push_back(r);
    auto fits = parity_scaling_fit(m_c, radii);
    double worst_dev = 0.0;
    double worst_r2 = 1.0;
    for (const auto& f : fits) {
        const double target = (f.parity == 0) ? 0.0 : -1.0;
        worst_dev = std::max(worst_dev, std::abs(f.fitted_slope - target));
        worst_r2 = std::min(worst_r2, f.r_squared);
    }
    CheckResult res;
    res.name = "parity_selection_rule";
    res.value = worst_dev;
    res.threshold = slope_tol;
    res.pass = worst_dev <= slope_tol && worst_r2 > 0.99;
    std::ostringstream d;
    d << fits.size() << " tuples (m_i <= " << m_c << "), worst slope deviation " << worst_dev
      << ", worst fit r^2 " << worst_r2;
    res.detail = d.str();
    return res;
}

std::vector<CheckResult> run_verification_suite() {
    std::vector<CheckResult> out;
    out.push_back(check_parity_scaling());
    out.push_back(check_pinching());
    out.push_back(check_projection_lemma());
    out.push_back(check_gradient());
    return out;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& v) {
    const size_t n = v.size();
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        const double r = 0.5 * (double(i) + double(j)) + 1.0;
        for (size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

double spearman_correlation(const std::vector<double>& a, const std::vector<double>& b) {
    const std::vector<double> ra = average_ranks(a);
    const std::vector<double> rb = average_ranks(b);
    const size_t n = a.size();
    double ma = 0.0, mb = 0.0;
    for (size_t i = 0; i < n; ++i) {
        ma += ra[i];
        mb += rb[i];
    }
    ma /= double(n);
    mb /= double(n);
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (size_t i = 0; i < n; ++i) {
        saa += (ra[i] - ma) * (ra[i] - ma);
        sbb += (rb[i] - mb) * (rb[i] - mb);
        sab += (ra[i] - ma) * (rb[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

}  // namespace cvtomo
