#include "cvtomo/benchmark.hpp"

#include <algorithm>
#include <cmath>

#include "cvtomo/parallel.hpp"
#include <Eigen/SVD>

#include "cvtomo/reconstruct.hpp"
#include "cvtomo/rng.hpp"
#include "cvtomo/statesim.hpp"

namespace cvtomo {

namespace {

std::vector<MeasurementSetting> wigner_lattice(int m_c, double margin) {
    const BasisSpec basis = BasisSpec::fock(m_c);
    const int side = 2 * m_c + 1;
    const double half = std::sqrt(double(m_c)) + margin;
    std::vector<MeasurementSetting> settings;
    settings.reserve(size_t(side) * size_t(side));
    for (int iy = 0; iy < side; ++iy)
        for (int ix = 0; ix < side; ++ix) {
            const cplx beta(-half + 2.0 * half * ix / (side - 1),
                            -half + 2.0 * half * iy / (side - 1));
            settings.push_back({beta, default_ncut(beta, basis)});
        }
    return settings;
}

// One simulated reconstruction; returns the infidelity against the truth.
double one_trial(const std::vector<MeasurementSetting>& settings, MeasureMode mode,
                 const SensingMatrix& A, const Eigen::MatrixXcd& pinv,
                 const DensityMatrix& truth, long n_rep, uint64_t seed,
                 uint64_t stream_base) {
    Eigen::VectorXd b(A.entries.rows());
    if (mode == MeasureMode::Qn) {
        int at = 0;
        for (size_t j = 0; j < settings.size(); ++j) {
            Eigen::VectorXd probs = exact_qn(truth, settings[j]);
            std::vector<long> counts =
                sample_counts(probs, n_rep, seed, Philox::mix(stream_base + j, seed));
            for (int n = 0; n <= settings[j].n_c; ++n)
                b(at++) = double(counts[size_t(n)]) / double(n_rep);
        }
    } else {
        // Wigner: per setting a parity coin with p(even) = (1 + W)/2
        Eigen::VectorXd w_exact = (A.entries * vectorize(truth.entries)).real();
        for (size_t j = 0; j < settings.size(); ++j) {
            const double p_even = std::clamp(0.5 * (1.0 + w_exact(long(j))), 0.0, 1.0);
            Eigen::VectorXd coin(2);
            coin << p_even, 1.0 - p_even;
            std::vector<long> counts =
                sample_counts(coin, n_rep, seed, Philox::mix(stream_base + j, seed));
            b(long(j)) = 2.0 * double(counts[0]) / double(n_rep) - 1.0;
        }
    }
    Eigen::VectorXcd x = pinv * b.cast<cplx>();
    Eigen::MatrixXcd raw = unvectorize(x);
    Eigen::MatrixXcd rho = project_physical(0.5 * (raw + raw.adjoint().eval()));
    return 1.0 - fidelity(rho, truth.entries);
}

}  // namespace

BenchmarkResult run_benchmark(const BenchmarkConfig& config) {
    const int m_c = config.m_c;
    const BasisSpec basis = BasisSpec::fock(m_c);
    BenchmarkResult result;

    struct Scheme {
        std::string name;
        MeasureMode mode;
        std::vector<MeasurementSetting> settings;
        SensingMatrix A;
        Eigen::MatrixXcd pinv;  // least-squares inverse, reused across trials
    };
    std::vector<Scheme> schemes;
    for (const std::string& name : config.schemes) {
        Scheme s;
        s.name = name;
        if (name == "wigner-lattice") {
            s.mode = MeasureMode::Wigner;
            s.settings = wigner_lattice(m_c, config.lattice_margin);
        } else if (name == "wigner-optimized") {
            s.mode = MeasureMode::Wigner;
            OptimizeOptions opts;
            opts.mode = MeasureMode::Wigner;
            opts.max_iters = config.wigner_optimize_iters;
            // break the lattice's exact spectral degeneracies before descending
            std::vector<MeasurementSetting> init = wigner_lattice(m_c, config.lattice_margin);
            Philox jitter(config.seed, 0xb19);
            for (auto& st : init) st.beta += 1e-3 * cplx(jitter.normal(), jitter.normal());
            s.settings = optimize_settings(init, basis, opts).settings;
        } else if (name == "qn-optimized") {
            s.mode = MeasureMode::Qn;
            const auto [r_star, kappa] = optimal_ring_radius(RingFamily::HRC, m_c);
            (void)kappa;
            s.settings = ring_settings(RingFamily::HRC, m_c, r_star);
        } else {
            throw ConfigError("run_benchmark: unknown scheme '" + name + "'");
        }
        s.A = build_sensing(s.settings, basis, s.mode);
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(s.A.entries,
                                            Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& sv = svd.singularValues();
        if (sv(sv.size() - 1) <= 1e-10 * sv(0))
            throw ConfigError("run_benchmark: scheme '" + name + "' is rank deficient");
        s.pinv = svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
        result.scheme_settings.emplace_back(s.name, s.settings);
        schemes.push_back(std::move(s));
    }

    struct Cell {
        int scheme;
        long n_tot;
        int trial;
    };
    std::vector<Cell> cells;
    for (int si = 0; si < int(schemes.size()); ++si)
        for (long n_tot : config.n_tot)
            for (int t = 0; t < config.trials; ++t) cells.push_back({si, n_tot, t});

    result.rows.resize(cells.size());
    parallel_for(int(cells.size()), [&](int i) {
        const Cell& cell = cells[size_t(i)];
        const Scheme& scheme = schemes[size_t(cell.scheme)];
        DensityMatrix truth =
            random_density(m_c, config.purity, Philox::mix(config.seed, 1000 + cell.trial));
        const long n_rep = std::max<long>(cell.n_tot / long(scheme.settings.size()), 1);
        const uint64_t stream_base =
            uint64_t(cell.scheme) * 1000003u + uint64_t(cell.trial) * 7919u;
        result.rows[size_t(i)] = {scheme.name, cell.n_tot, cell.trial,
                                  one_trial(scheme.settings, scheme.mode, scheme.A,
                                            scheme.pinv, truth, n_rep,
                                            config.seed + uint64_t(cell.trial),
                                            stream_base + uint64_t(cell.n_tot % 997))};
    });
    return result;
}

double benchmark_median(const std::vector<BenchmarkRow>& rows, const std::string& scheme,
                        long n_tot) {
    std::vector<double> vals;
    for (const auto& r : rows)
        if (r.scheme == scheme && r.n_tot == n_tot) vals.push_back(r.infidelity);
    if (vals.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(vals.begin(), vals.end());
    return vals[vals.size() / 2];
}

}  // namespace cvtomo
