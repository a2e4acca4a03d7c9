// Acceptance suite: one line per criterion, measured values in the detail.
// Exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "cvtomo/asymptotics.hpp"
#include "cvtomo/benchmark.hpp"
#include "cvtomo/design.hpp"
#include "cvtomo/fisher.hpp"
#include "cvtomo/reconstruct.hpp"
#include "cvtomo/rng.hpp"
#include "cvtomo/sensing.hpp"
#include "cvtomo/statesim.hpp"
#include "cvtomo/verify.hpp"

using namespace cvtomo;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(4);
    out << v;
    return out.str();
}

// 1. optimal-radius HRC kappa^2 grows linearly in m_c with slope 3.28 +- 10%
Outcome criterion_kappa_scaling() {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<double> ks;
    for (int m_c = 1; m_c <= 7; ++m_c) {
        const auto [r_star, kappa] = optimal_ring_radius(RingFamily::HRC, m_c, 0.5, 12.0);
        (void)r_star;
        ks.push_back(kappa * kappa);
        sx += m_c;
        sy += kappa * kappa;
        sxx += double(m_c) * m_c;
        sxy += double(m_c) * kappa * kappa;
    }
    const double n = 7.0;
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    Outcome out;
    out.pass = std::abs(slope - 3.28) <= 0.328;
    out.detail = "fitted slope " + fmt(slope) + " (target 3.28 +- 0.328); kappa^2 at m_c=1..7:";
    for (double k : ks) out.detail += " " + fmt(k);
    return out;
}

// 2. HRC kappa approaches FRC kappa as the ring radius grows (m_c = 4)
Outcome criterion_hrc_frc_convergence() {
    auto gap_at = [&](double r) {
        const double kf = radius_scan(RingFamily::FRC, 4, {r})[0].kappa;
        const double kh = radius_scan(RingFamily::HRC, 4, {r})[0].kappa;
        return std::abs(kh - kf) / kf;
    };
    const double g6 = gap_at(6.0), g8 = gap_at(8.0), g10 = gap_at(10.0);
    Outcome out;
    out.pass = g8 < 0.02 && g10 < 0.02 && g10 <= g6;
    out.detail = "relative gaps: r=6 " + fmt(g6) + ", r=8 " + fmt(g8) + ", r=10 " + fmt(g10);
    return out;
}

// 3. multi-ring comparison: m_c=1 improvement in [1.0%, 2.5%]; m_c=2,3 < 0.1%
Outcome criterion_mfrc() {
    Outcome out;
    out.pass = true;
    for (int m_c : {1, 2, 3}) {
        std::vector<double> grid;
        const double step = (m_c == 1) ? 0.025 : 0.05;
        for (double r = 0.25; r <= 12.0 + 1e-9; r += step) grid.push_back(r);
        MfrcResult res = mfrc_compare(m_c, grid);
        bool ok;
        if (m_c == 1)
            ok = res.improvement >= 0.010 && res.improvement <= 0.025;
        else
            ok = res.improvement < 0.001;
        out.pass = out.pass && ok;
        out.detail += "m_c=" + std::to_string(m_c) + ": kappa " + fmt(res.kappa_single) +
                      " -> " + fmt(res.kappa_double) + ", improvement " +
                      fmt(100.0 * res.improvement) + "% (kappaC " +
                      fmt(100.0 * res.improvement_kappa_c) + "%)" + (ok ? "" : " [out of band]") +
                      "; ";
    }
    return out;
}

// 4. parity selection rule: slopes 0 / -1 within 0.15, fits reliable
Outcome criterion_parity() {
    CheckResult res = check_parity_scaling(2, 0.15);
    return {res.pass, res.detail};
}

// 5. homodyne covariance matches the large-radius excitation-count covariance
Outcome criterion_homodyne() {
    CorrespondenceReport at10 = homodyne_qn_correspondence(2, 10.0);
    CorrespondenceReport at14 = homodyne_qn_correspondence(2, 14.0);
    double worst_odd = 0.0;
    for (int m1 = 0; m1 <= 2; ++m1)
        for (int m2 = 0; m2 <= 2; ++m2)
            for (int m3 = 0; m3 <= 2; ++m3)
                for (int m4 = 0; m4 <= 2; ++m4)
                    if ((m1 + m2 + m3 + m4) % 2 == 1)
                        worst_odd = std::max(worst_odd,
                                             std::abs(hermite_quartic_integral(m1, m2, m3, m4)));
    Outcome out;
    out.pass = at10.max_rel_deviation < 0.05 &&
               at14.max_rel_deviation < at10.max_rel_deviation && worst_odd < 1e-13;
    out.detail = "deviation r=10: " + fmt(at10.max_rel_deviation) + ", r=14: " +
                 fmt(at14.max_rel_deviation) + "; worst odd integral " + fmt(worst_odd);
    return out;
}

// 6. perturbation-theory gradient vs central finite differences
Outcome criterion_gradient() {
    CheckResult res = check_gradient(20, 11);
    return {res.pass, res.detail};
}

// 7. physical projection can only improve the estimate
Outcome criterion_projection() {
    CheckResult res = check_projection_lemma(1000, 12);
    return {res.pass, res.detail};
}

// 8. pinching never increases the condition number
Outcome criterion_pinching() {
    CheckResult res = check_pinching(500, 13);
    return {res.pass, res.detail};
}

// 9. informational completeness counts: full rank at m_c+1 settings,
//    deficiency at m_c settings, for m_c <= 6
Outcome criterion_ic_counts() {
    Philox rng(14, 0);
    Outcome out;
    out.pass = true;
    for (int m_c = 1; m_c <= 6; ++m_c) {
        const int dim = (m_c + 1) * (m_c + 1);
        int full_ok = 0, deficient_ok = 0;
        const int draws = 20;
        for (int d = 0; d < draws; ++d) {
            std::vector<MeasurementSetting> settings;
            for (int j = 0; j <= m_c; ++j) {
                const cplx beta = std::polar(1.0 + 2.0 * rng.uniform(), 2 * M_PI * rng.uniform());
                settings.push_back({beta, default_ncut(beta, BasisSpec::fock(m_c))});
            }
            if (condition_number(build_sensing(settings, BasisSpec::fock(m_c))).rank == dim)
                ++full_ok;
            settings.pop_back();
            if (condition_number(build_sensing(settings, BasisSpec::fock(m_c))).rank < dim)
                ++deficient_ok;
        }
        const bool ok = full_ok == draws && deficient_ok == draws;
        out.pass = out.pass && ok;
        out.detail += "m_c=" + std::to_string(m_c) + ": full " + std::to_string(full_ok) + "/20" +
                      ", deficient " + std::to_string(deficient_ok) + "/20; ";
    }
    return out;
}

// 10. benchmark: excitation counting beats the Wigner lattice by >= 5x
//     (target 10x) at the largest N_tot, more so at larger m_c
Outcome criterion_benchmark() {
    auto run_at = [&](int m_c) {
        BenchmarkConfig cfg;
        cfg.m_c = m_c;
        cfg.n_tot = {100000, 1000000, 10000000};
        cfg.trials = 5;
        cfg.seed = 20;
        return run_benchmark(cfg);
    };
    BenchmarkResult at2 = run_at(2);
    BenchmarkResult at5 = run_at(5);
    auto advantage = [&](const BenchmarkResult& res, long n_tot) {
        return benchmark_median(res.rows, "wigner-lattice", n_tot) /
               benchmark_median(res.rows, "qn-optimized", n_tot);
    };
    const double ratio2 = advantage(at2, 10000000);
    const double ratio5 = advantage(at5, 10000000);
    bool monotone = true;
    for (const BenchmarkResult* res : {&at2, &at5})
        for (const std::string scheme :
             {"wigner-lattice", "wigner-optimized", "qn-optimized"}) {
            double prev = std::numeric_limits<double>::infinity();
            for (long nt : {100000L, 1000000L, 10000000L}) {
                const double med = benchmark_median(res->rows, scheme, nt);
                if (med > prev) monotone = false;
                prev = med;
            }
        }
    Outcome out;
    out.pass = ratio5 >= 5.0 && ratio5 > ratio2 && monotone;
    out.detail = "median lattice/qn advantage at N_tot=1e7: m_c=2 " + fmt(ratio2) +
                 ", m_c=5 " + fmt(ratio5) + " (gate >= 5, target >= 10" +
                 (ratio5 >= 10.0 ? ", target met" : "") + "); medians monotone " +
                 (monotone ? "yes" : "no");
    return out;
}

// 11. kappa-map structure for p = 2, 3, 4 cats: estimate correlates, and
//     rank-deficient cells sit on the bisector/collinearity loci
Outcome criterion_scan_structure() {
    Outcome out;
    out.pass = true;
    struct Config {
        int p;
        std::vector<cplx> alphas;
    };
    std::vector<Config> configs;
    configs.push_back({2, {cplx(1.5, 0.0), cplx(-1.5, 0.0)}});
    {
        std::vector<cplx> tri;
        for (int i = 0; i < 3; ++i) tri.push_back(std::polar(1.6, 2.0 * M_PI * i / 3.0));
        configs.push_back({3, tri});
    }
    {
        std::vector<cplx> quad;
        for (int i = 0; i < 4; ++i)
            quad.push_back(std::polar(1.7, M_PI / 4.0 + 2.0 * M_PI * i / 4.0));
        configs.push_back({4, quad});
    }
    for (const auto& config : configs) {
        BasisSpec basis = BasisSpec::coherent(config.alphas);
        const int gn = 41;
        const double hw = 4.0;
        const double cell = 2.0 * hw / (gn - 1);
        std::vector<double> kappa_vals, estimate_vals;
        int misplaced = 0, deficient = 0;
        for (int iy = 0; iy < gn; ++iy)
            for (int ix = 0; ix < gn; ++ix) {
                const cplx beta(-hw + cell * ix, -hw + cell * iy);
                MeasurementSetting s{beta, default_ncut(beta, basis)};
                ConditionReport rep = condition_number(build_sensing({s}, basis));
                if (std::isfinite(rep.kappa)) {
                    kappa_vals.push_back(rep.kappa);
                    estimate_vals.push_back(cn_estimate_cat(config.alphas, beta));
                    continue;
                }
                ++deficient;
                // distance to the nearest bisector or collinearity line
                double dist = 1e18;
                for (size_t i = 0; i < config.alphas.size(); ++i)
                    for (size_t j = i + 1; j < config.alphas.size(); ++j) {
                        const cplx a = config.alphas[i], b = config.alphas[j];
                        const cplx mid = 0.5 * (a + b);
                        const cplx dir = (b - a) / std::abs(b - a);
                        // bisector: passes mid, normal to dir
                        dist = std::min(dist, std::abs(std::real(std::conj(dir) * (beta - mid))));
                        // collinearity: the line through a and b
                        dist = std::min(dist, std::abs(std::imag(std::conj(dir) * (beta - a))));
                    }
                if (dist > cell * M_SQRT2) ++misplaced;
            }
        const double corr = spearman_correlation(kappa_vals, estimate_vals);
        const bool ok = corr > 0.8 && misplaced == 0 && deficient > 0;
        out.pass = out.pass && ok;
        out.detail += "p=" + std::to_string(config.p) + ": spearman " + fmt(corr) + ", " +
                      std::to_string(deficient) + " deficient cells, " +
                      std::to_string(misplaced) + " off-locus; ";
    }
    return out;
}

// 12. the fidelity lower bound holds under fixed relative bias
Outcome criterion_bound() {
    Philox rng(21, 0);
    int violations = 0;
    double worst_margin = 1.0;
    for (int trial = 0; trial < 500; ++trial) {
        const int m_c = 1 + int(rng.next_u32() % 4);
        DensityMatrix rho = random_density(m_c, rng.uniform(), 9000 + uint64_t(trial));
        std::vector<MeasurementSetting> settings;
        for (int j = 0; j <= m_c; ++j) {
            const cplx beta = std::polar(1.0 + 1.8 * rng.uniform(), 2 * M_PI * rng.uniform());
            settings.push_back({beta, default_ncut(beta, rho.basis)});
        }
        MeasurementRecord rec = simulate_record(rho, settings, 0, 1);
        LinearSystem sys = assemble_system(rec, rho.basis);
        ConditionReport cond = condition_number(sys.A);
        const double eps = std::pow(10.0, -4.0 + 3.0 * rng.uniform());
        Eigen::VectorXd noisy = add_relative_bias(sys.b, eps, 9500 + uint64_t(trial), 3);
        Eigen::MatrixXcd tau = project_physical(least_squares(sys.A, noisy));
        const double f = fidelity(rho.entries, tau);
        const double bound =
            error_bound(cond.kappa, (m_c + 1) * (m_c + 1), rho.entries.norm(), eps);
        if (f < bound - 1e-12) ++violations;
        worst_margin = std::min(worst_margin, f - bound);
    }
    Outcome out;
    out.pass = violations == 0;
    out.detail = "500 trials, " + std::to_string(violations) +
                 " violations; smallest fidelity-bound margin " + fmt(worst_margin);
    return out;
}

// 13. Fisher determinant map agrees with the condition-number map
Outcome criterion_fisher_cn() {
    std::vector<cplx> alphas = {cplx(1.5, 0.0), cplx(-1.5, 0.0)};
    BasisSpec basis = BasisSpec::coherent(alphas);
    DensityMatrix cat = cat_density(alphas, Eigen::MatrixXcd::Identity(2, 2));
    const int gn = 41;
    const double hw = 3.0;
    std::vector<double> det_vals, inv_kappa;
    for (int iy = 0; iy < gn; ++iy)
        for (int ix = 0; ix < gn; ++ix) {
            const cplx beta(-hw + 2.0 * hw * ix / (gn - 1), -hw + 2.0 * hw * iy / (gn - 1));
            MeasurementSetting s{beta, default_ncut(beta, basis)};
            ConditionReport rep = condition_number(build_sensing({s}, basis));
            if (!std::isfinite(rep.kappa)) continue;
            det_vals.push_back(fisher_matrix(cat.entries, alphas, beta).determinant());
            inv_kappa.push_back(1.0 / rep.kappa);
        }
    const double corr = spearman_correlation(det_vals, inv_kappa);
    Outcome out;
    out.pass = corr > 0.7;
    out.detail = "spearman(det I, 1/kappa) = " + fmt(corr) + " over " +
                 std::to_string(det_vals.size()) + " grid cells";
    return out;
}

// 14. noiseless round trips through all three estimators
Outcome criterion_round_trips() {
    Outcome out;
    out.pass = true;
    Philox rng(22, 0);
    for (int m_c = 1; m_c <= 4; ++m_c) {
        DensityMatrix rho = random_density(m_c, 0.4, 7700 + uint64_t(m_c));
        std::vector<MeasurementSetting> settings;
        for (int j = 0; j <= m_c; ++j) {
            const cplx beta = std::polar(1.0 + 1.8 * rng.uniform(), 2 * M_PI * rng.uniform());
            settings.push_back({beta, default_ncut(beta, rho.basis) + 10});
        }
        MeasurementRecord rec = simulate_record(rho, settings, 0, 1);
        LinearSystem sys = assemble_system(rec, rho.basis);
        const double f_ls = fidelity(project_physical(least_squares(sys.A, sys.b)), rho.entries);
        const double f_fit = fidelity(fit_physical(sys.A, sys.b, 4000, 1e-16).rho, rho.entries);
        const double f_imle = fidelity(imle(rec, m_c, 40000, 0.0).rho, rho.entries);
        const bool ok = f_ls > 1.0 - 1e-6 && f_fit > 1.0 - 1e-6 && f_imle > 1.0 - 1e-6;
        out.pass = out.pass && ok;
        out.detail += "m_c=" + std::to_string(m_c) + ": ls " + fmt(1.0 - f_ls) + ", fit " +
                      fmt(1.0 - f_fit) + ", imle " + fmt(1.0 - f_imle) + " infidelity; ";
    }
    return out;
}

}  // namespace

int main() {
    struct Entry {
        int id;
        const char* name;
        Outcome (*run)();
    };
    const std::vector<Entry> entries = {
        {1, "kappa^2 scaling over m_c", criterion_kappa_scaling},
        {2, "HRC-FRC convergence", criterion_hrc_frc_convergence},
        {3, "multi-ring comparison", criterion_mfrc},
        {4, "parity selection rule", criterion_parity},
        {5, "homodyne correspondence", criterion_homodyne},
        {6, "condition-number gradient", criterion_gradient},
        {7, "projection lemma", criterion_projection},
        {8, "pinching inequality", criterion_pinching},
        {9, "informational completeness counts", criterion_ic_counts},
        {10, "scheme benchmark", criterion_benchmark},
        {11, "kappa-map structure", criterion_scan_structure},
        {12, "fidelity bound validity", criterion_bound},
        {13, "Fisher / condition-number agreement", criterion_fisher_cn},
        {14, "noiseless round trips", criterion_round_trips},
    };

    int failures = 0;
    for (const Entry& e : entries) {
        const auto start = std::chrono::steady_clock::now();
        Outcome res = e.run();
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!res.pass) ++failures;
        std::printf("[%s] criterion %2d (%s): %s [%.1fs]\n", res.pass ? "PASS" : "FAIL", e.id,
                    e.name, res.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", int(entries.size()) - failures, entries.size());
    return failures == 0 ? 0 : 1;
}
