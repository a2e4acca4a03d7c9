#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "cvtomo/rng.hpp"
#include "cvtomo/statesim.hpp"

using namespace cvtomo;

TEST_CASE("random_density invariants and determinism") {
    for (uint64_t seed : {1ULL, 42ULL}) {
        for (double knob : {0.0, 0.35, 1.0}) {
            DensityMatrix rho = random_density(4, knob, seed);
            CHECK((rho.entries - rho.entries.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
            CHECK(std::abs(rho.entries.trace().real() - 1.0) < 1e-12);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.entries, Eigen::EigenvaluesOnly);
            CHECK(es.eigenvalues()(0) >= -1e-10);
        }
        DensityMatrix a = random_density(3, 0.5, seed);
        DensityMatrix b = random_density(3, 0.5, seed);
        CHECK((a.entries - b.entries).cwiseAbs().maxCoeff() == 0.0);
    }
    CHECK(random_density(4, 1.0, 9).purity() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cat_density normalization against the overlap formula") {
    // even cat with alpha = 1: Z = 2 (1 + e^{-2})
    std::vector<cplx> alphas = {cplx(1.0, 0.0), cplx(-1.0, 0.0)};
    Eigen::MatrixXcd ones = Eigen::MatrixXcd::Ones(2, 2);
    DensityMatrix cat = cat_density(alphas, ones);
    const double z = 2.0 * (1.0 + std::exp(-2.0));
    CHECK(z == doctest::Approx(2.2706705664732254).epsilon(1e-14));
    CHECK(std::abs(cat.entries(0, 0) - cplx(1.0 / z)) < 1e-14);

    // trace in the coherent frame equals one
    cplx tr = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            tr += cat.entries(i, j) * coherent_overlap(alphas[size_t(j)], alphas[size_t(i)]);
    CHECK(std::abs(tr - cplx(1.0)) < 1e-13);

    // Fock conversion keeps the trace
    DensityMatrix fock = cat.to_fock(default_ncut(0.0, cat.basis));
    CHECK(std::abs(fock.entries.trace().real() - 1.0) < 1e-8);

    // single component: a pure coherent state
    DensityMatrix single = cat_density({cplx(0.8, -0.3)}, Eigen::MatrixXcd::Ones(1, 1));
    CHECK(single.purity() == doctest::Approx(1.0).epsilon(1e-10));

    // a non-PSD coefficient matrix is rejected
    Eigen::MatrixXcd bad(2, 2);
    bad << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_AS(cat_density(alphas, bad), ConfigError);
}

TEST_CASE("exact_qn: vacuum Poisson, sensing consistency, unit total") {
    DensityMatrix vac;
    vac.basis = BasisSpec::fock(0);
    vac.entries = Eigen::MatrixXcd::Ones(1, 1);
    const cplx beta(1.1, -0.6);
    MeasurementSetting s{beta, 40};
    Eigen::VectorXd probs = exact_qn(vac, s);
    const double x2 = std::norm(beta);
    for (int n = 0; n <= 12; ++n) {
        const double expect = std::exp(-x2 + n * std::log(x2) - log_factorial(n));
        CHECK(probs(n) == doctest::Approx(expect).epsilon(1e-11));
    }
    CHECK(std::abs(probs.sum() - 1.0) < 1e-15);  // overflow is the complement

    DensityMatrix rho = random_density(3, 0.4, 5);
    MeasurementSetting s2{cplx(0.4, 1.2), default_ncut(cplx(0.4, 1.2), rho.basis)};
    Eigen::VectorXd p2 = exact_qn(rho, s2);
    SensingMatrix A = build_sensing({s2}, rho.basis);
    Eigen::VectorXd via = (A.entries * vectorize(rho.entries)).real();
    for (int n = 0; n <= s2.n_c; ++n) CHECK(std::abs(p2(n) - via(n)) < 1e-12);
}

TEST_CASE("coherent-basis exact_qn round trips through Fock conversion") {
    std::vector<cplx> alphas = {cplx(1.4, 0.2), cplx(-1.1, -0.5)};
    Eigen::MatrixXcd coeff(2, 2);
    coeff << 0.6, cplx(0.25, 0.1), cplx(0.25, -0.1), 0.4;
    DensityMatrix cat = cat_density(alphas, coeff);
    DensityMatrix fock = cat.to_fock(default_ncut(0.0, cat.basis));
    const cplx beta(0.5, 0.8);
    MeasurementSetting s{beta, 50};
    Eigen::VectorXd via_cat = exact_qn(cat, s);
    Eigen::VectorXd via_fock = exact_qn(fock, s);
    CHECK((via_cat - via_fock).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("sample_counts basics") {
    Eigen::VectorXd probs(4);
    probs << 0.1, 0.2, 0.3, 0.4;
    auto counts = sample_counts(probs, 10000, 3);
    long total = 0;
    for (long c : counts) total += c;
    CHECK(total == 10000);

    auto again = sample_counts(probs, 10000, 3);
    CHECK(counts == again);
    auto other_stream = sample_counts(probs, 10000, 3, 1);
    CHECK(counts != other_stream);

    Eigen::VectorXd bad(2);
    bad << 0.9, 0.0;
    CHECK_THROWS_AS(sample_counts(bad, 10, 1), InvalidDistributionError);
    bad << 1.1, -0.1;
    CHECK_THROWS_AS(sample_counts(bad, 10, 1), InvalidDistributionError);
    // tiny negatives are clipped
    Eigen::VectorXd tiny(2);
    tiny << 1.0 + 5e-13, -5e-13;
    CHECK_NOTHROW(sample_counts(tiny, 10, 1));
}

TEST_CASE("sample_counts empirical convergence at N_rep = 1e6") {
    Eigen::VectorXd probs(6);
    probs << 0.05, 0.1, 0.15, 0.2, 0.25, 0.25;
    const long n_rep = 1000000;
    int failures = 0;
    for (uint64_t stream = 0; stream < 20; ++stream) {
        auto counts = sample_counts(probs, n_rep, 2024, stream);
        const double bound = 5.0 * std::sqrt(probs.maxCoeff() / double(n_rep));
        for (int i = 0; i < probs.size(); ++i) {
            const double freq = double(counts[size_t(i)]) / double(n_rep);
            if (std::abs(freq - probs(i)) >= bound) ++failures;
        }
    }
    CHECK(failures == 0);  // 5-sigma band, 120 comparisons
}

TEST_CASE("sample_counts chi-square goodness of fit") {
    Eigen::VectorXd probs(5);
    probs << 0.3, 0.25, 0.2, 0.15, 0.1;
    const long n_rep = 20000;
    // chi-square with 4 dof: 0.1% and 99.9% quantiles
    const double lo = 0.0908, hi = 18.467;
    int inside = 0;
    const int reps = 100;
    for (int r = 0; r < reps; ++r) {
        auto counts = sample_counts(probs, n_rep, 999, uint64_t(r));
        double chi2 = 0.0;
        for (int i = 0; i < probs.size(); ++i) {
            const double expected = probs(i) * double(n_rep);
            chi2 += (double(counts[size_t(i)]) - expected) * (double(counts[size_t(i)]) - expected) / expected;
        }
        if (chi2 > lo && chi2 < hi) ++inside;
    }
    CHECK(inside >= 98);
}

TEST_CASE("shot-noise magnitude scales as 1/sqrt(N_rep)") {
    DensityMatrix rho = random_density(3, 0.5, 12);
    const cplx beta(0.9, 0.4);
    MeasurementSetting s{beta, default_ncut(beta, rho.basis)};
    Eigen::VectorXd probs = exact_qn(rho, s);
    Eigen::VectorXd b = probs.head(s.n_c + 1);

    std::vector<double> log_n, log_noise;
    for (long n_rep : {1000L, 10000L, 100000L, 1000000L}) {
        double acc = 0.0;
        const int reps = 40;
        for (int r = 0; r < reps; ++r) {
            auto counts = sample_counts(probs, n_rep, 31337, uint64_t(100 * n_rep + r));
            Eigen::VectorXd f(s.n_c + 1);
            for (int n = 0; n <= s.n_c; ++n) f(n) = double(counts[size_t(n)]) / double(n_rep);
            acc += (f - b).norm() / b.norm();
        }
        log_n.push_back(std::log(double(n_rep)));
        log_noise.push_back(std::log(acc / reps));
    }
    // least-squares slope
    double mx = 0, my = 0;
    for (size_t i = 0; i < log_n.size(); ++i) {
        mx += log_n[i];
        my += log_noise[i];
    }
    mx /= double(log_n.size());
    my /= double(log_n.size());
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < log_n.size(); ++i) {
        sxx += (log_n[i] - mx) * (log_n[i] - mx);
        sxy += (log_n[i] - mx) * (log_noise[i] - my);
    }
    const double slope = sxy / sxx;
    CHECK(slope == doctest::Approx(-0.5).epsilon(0.1));  // -0.5 +- 0.05
}

TEST_CASE("simulate_record totals and the exact-frequency sentinel") {
    DensityMatrix rho = random_density(2, 0.7, 21);
    std::vector<MeasurementSetting> settings;
    for (double ang : {0.1, 1.3, 2.9}) {
        const cplx beta = std::polar(1.4, ang);
        settings.push_back({beta, default_ncut(beta, rho.basis)});
    }
    MeasurementRecord rec = simulate_record(rho, settings, 5000, 77);
    for (size_t j = 0; j < rec.settings.size(); ++j) {
        long total = rec.settings[j].overflow;
        for (long c : rec.settings[j].counts) total += c;
        CHECK(total == 5000);
    }

    MeasurementRecord exact = simulate_record(rho, settings, 0, 77);
    for (size_t j = 0; j < exact.settings.size(); ++j) {
        Eigen::VectorXd probs = exact_qn(rho, settings[j]);
        const auto f = exact.frequencies_of(int(j));
        for (int n = 0; n <= settings[j].n_c; ++n) CHECK(f[size_t(n)] == probs(n));
    }
}

TEST_CASE("add_relative_bias hits the requested noise magnitude") {
    Eigen::VectorXd b(8);
    b << 0.3, 0.1, 0.05, 0.2, 0.15, 0.1, 0.07, 0.03;
    for (double eps : {1e-4, 1e-2}) {
        Eigen::VectorXd noisy = add_relative_bias(b, eps, 5, 9);
        CHECK((noisy - b).norm() / b.norm() == doctest::Approx(eps).epsilon(1e-12));
    }
}
