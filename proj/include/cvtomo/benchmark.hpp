#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cvtomo/design.hpp"

namespace cvtomo {

/// Measurement-scheme comparison on simulated shot-noise data: Wigner
/// sampling on a square lattice, gradient-optimized Wigner settings, and
/// excitation counting on the optimal-radius half ring.
struct BenchmarkConfig {
    int m_c = 2;
    std::vector<long> n_tot = {100000, 1000000, 10000000};
    int trials = 5;
    std::vector<std::string> schemes = {"wigner-lattice", "wigner-optimized", "qn-optimized"};
    uint64_t seed = 1;
    double purity = 0.5;
    double lattice_margin = 1.0;        // grid spans +-(sqrt(m_c) + margin)
    int wigner_optimize_iters = 120;
};

struct BenchmarkRow {
    std::string scheme;
    long n_tot = 0;
    int trial = 0;
    double infidelity = 0.0;
};

struct BenchmarkResult {
    std::vector<BenchmarkRow> rows;
    // per-scheme settings actually used, for the metadata record
    std::vector<std::pair<std::string, std::vector<MeasurementSetting>>> scheme_settings;
};

BenchmarkResult run_benchmark(const BenchmarkConfig& config);

/// Median of per-trial infidelities for one (scheme, n_tot) cell.
double benchmark_median(const std::vector<BenchmarkRow>& rows, const std::string& scheme,
                        long n_tot);

}  // namespace cvtomo
