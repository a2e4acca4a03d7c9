#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "cvtomo/asymptotics.hpp"
#include "cvtomo/benchmark.hpp"
#include "cvtomo/design.hpp"
#include "cvtomo/fisher.hpp"
#include "cvtomo/io.hpp"
#include "cvtomo/parallel.hpp"
#include "cvtomo/reconstruct.hpp"
#include "cvtomo/rng.hpp"
#include "cvtomo/statesim.hpp"
#include "cvtomo/verify.hpp"

using namespace cvtomo;
using nlohmann::json;

namespace {

// exit codes are part of the stable interface
constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitOptimizer = 3;
constexpr int kExitIncomplete = 4;

struct BasisOptions {
    std::string basis = "fock:2";
    std::string alphas;

    BasisSpec resolve() const {
        const auto colon = basis.find(':');
        const std::string kind = basis.substr(0, colon);
        auto cutoff = [&]() {
            if (colon == std::string::npos)
                throw ConfigError("basis '" + basis + "' needs a cutoff, e.g. fock:4");
            return std::stoi(basis.substr(colon + 1));
        };
        if (kind == "fock") return BasisSpec::fock(cutoff());
        if (kind == "cat" || kind == "coherent") {
            if (alphas.empty())
                throw ConfigError("basis '" + kind + "' requires --alphas");
            return BasisSpec::coherent(parse_complex_list(alphas));
        }
        if (kind == "dfock" || kind == "displaced-fock") {
            if (alphas.empty())
                throw ConfigError("basis '" + kind + "' requires --alphas");
            return BasisSpec::displaced_fock(parse_complex_list(alphas), cutoff());
        }
        throw ConfigError("unknown basis '" + basis + "'");
    }
};

struct StateOptions {
    std::string state = "random";
    int mc = 2;
    double purity = 0.5;
    uint64_t state_seed = 1;
    std::string alphas;
    std::string cat_kind = "even";  // even | mixed
    int fock_n = 0;

    DensityMatrix resolve() const {
        if (state == "random") return random_density(mc, purity, state_seed);
        if (state == "cat") {
            if (alphas.empty()) throw ConfigError("cat state requires --alphas");
            std::vector<cplx> a = parse_complex_list(alphas);
            const int p = int(a.size());
            Eigen::MatrixXcd coeff;
            if (cat_kind == "even")
                coeff = Eigen::MatrixXcd::Ones(p, p);
            else if (cat_kind == "mixed")
                coeff = Eigen::MatrixXcd::Identity(p, p);
            else
                throw ConfigError("unknown --cat-kind '" + cat_kind + "'");
            return cat_density(a, coeff);
        }
        if (state == "fock") {
            if (fock_n > mc) throw ConfigError("--fock-n must not exceed --mc");
            DensityMatrix rho;
            rho.basis = BasisSpec::fock(mc);
            rho.entries = Eigen::MatrixXcd::Zero(mc + 1, mc + 1);
            rho.entries(fock_n, fock_n) = 1.0;
            return rho;
        }
        throw ConfigError("unknown state '" + state + "'");
    }

    json to_json() const {
        json j;
        j["type"] = state;
        if (state == "random") {
            j["m_c"] = mc;
            j["purity"] = purity;
            j["seed"] = state_seed;
        } else if (state == "cat") {
            j["alphas"] = alphas;
            j["cat_kind"] = cat_kind;
        } else if (state == "fock") {
            j["m_c"] = mc;
            j["n"] = fock_n;
        }
        return j;
    }

    static DensityMatrix from_json(const json& j) {
        StateOptions opts;
        opts.state = j.at("type").get<std::string>();
        if (opts.state == "random") {
            opts.mc = j.at("m_c").get<int>();
            opts.purity = j.at("purity").get<double>();
            opts.state_seed = j.at("seed").get<uint64_t>();
        } else if (opts.state == "cat") {
            opts.alphas = j.at("alphas").get<std::string>();
            opts.cat_kind = j.at("cat_kind").get<std::string>();
        } else if (opts.state == "fock") {
            opts.mc = j.at("m_c").get<int>();
            opts.fock_n = j.at("n").get<int>();
        }
        return opts.resolve();
    }
};

std::vector<double> parse_grid_spec(const std::string& spec) {
    // "lo:hi:step" inclusive
    std::vector<double> out;
    const auto c1 = spec.find(':');
    const auto c2 = spec.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw ConfigError("grid spec must be lo:hi:step, got '" + spec + "'");
    const double lo = std::stod(spec.substr(0, c1));
    const double hi = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
    const double step = std::stod(spec.substr(c2 + 1));
    if (step <= 0.0 || hi < lo) throw ConfigError("bad grid spec '" + spec + "'");
    for (double v = lo; v <= hi + 1e-12; v += step) out.push_back(v);
    return out;
}

int cmd_design(const BasisOptions& basis_opts, const std::string& family,
               const std::string& scan_radius, bool optimize, int n_beta, int starts,
               bool greedy, int target_mc, double threshold, uint64_t seed,
               const std::string& out, const std::string& out_csv) {
    BasisSpec basis = basis_opts.resolve();

    if (greedy) {
        if (basis.kind == BasisSpec::Kind::Fock)
            throw ConfigError("greedy design requires a cat or displaced-fock basis");
        DesignReport rep = greedy_select(basis.alphas, target_mc, threshold);
        write_json_file(out, to_json(rep));
        std::cout << "greedy design: " << rep.settings.size() << " settings, kappa "
                  << rep.condition.kappa << "\n";
        return kExitOk;
    }

    if (!family.empty()) {
        if (basis.kind != BasisSpec::Kind::Fock)
            throw ConfigError("ring families are defined over the fock basis");
        RingFamily fam;
        if (family == "hrc")
            fam = RingFamily::HRC;
        else if (family == "frc")
            fam = RingFamily::FRC;
        else
            throw ConfigError("unknown family '" + family + "' (hrc or frc)");

        std::vector<double> radii = parse_grid_spec(scan_radius.empty() ? "0.5:12:0.25"
                                                                        : scan_radius);
        auto curve = radius_scan(fam, basis.m_c, radii);
        if (!out_csv.empty()) {
            std::vector<std::vector<double>> rows;
            for (const auto& p : curve) rows.push_back({p.radius, p.kappa, p.merit});
            write_csv(out_csv, "radius,kappa,merit", rows);
        }
        const auto [r_star, kappa] = optimal_ring_radius(fam, basis.m_c, radii.front(),
                                                         radii.back());
        (void)kappa;
        DesignReport rep;
        rep.basis = basis;
        rep.settings = ring_settings(fam, basis.m_c, r_star);
        rep.condition = condition_number(build_sensing(rep.settings, basis));
        rep.converged = true;
        write_json_file(out, to_json(rep));
        std::cout << "ring design: family " << family << ", best radius " << r_star
                  << ", kappa " << rep.condition.kappa << "\n";
        return kExitOk;
    }

    if (optimize) {
        if (n_beta <= 0) n_beta = basis.kind == BasisSpec::Kind::Fock ? basis.m_c + 1 : 2;
        Philox rng(seed, 0x677);
        DesignReport best;
        best.condition.kappa = std::numeric_limits<double>::infinity();
        for (int s = 0; s < std::max(starts, 1); ++s) {
            std::vector<MeasurementSetting> init;
            for (int j = 0; j < n_beta; ++j)
                init.push_back(
                    {std::polar(0.8 + 2.4 * rng.uniform(), 2 * M_PI * rng.uniform()), 0});
            DesignReport rep = optimize_settings(init, basis);
            if (rep.condition.kappa < best.condition.kappa) best = rep;
        }
        write_json_file(out, to_json(best));
        std::cout << "optimized design: kappa " << best.condition.kappa << " with "
                  << best.settings.size() << " settings\n";
        return kExitOk;
    }

    throw ConfigError("design: pick one of --family, --optimize, --greedy");
}

int cmd_simulate(const std::string& design_path, const std::string& betas,
                 const StateOptions& state_opts, long n_rep, uint64_t seed,
                 const std::string& out) {
    DensityMatrix rho = state_opts.resolve();
    std::vector<MeasurementSetting> settings;
    if (!design_path.empty()) {
        DesignReport rep = design_report_from_json(read_json_file(design_path));
        settings = rep.settings;
    } else if (!betas.empty()) {
        for (const cplx beta : parse_complex_list(betas))
            settings.push_back({beta, default_ncut(beta, rho.basis)});
    } else {
        throw ConfigError("simulate: provide --design or --betas");
    }
    MeasurementRecord rec = simulate_record(rho, settings, n_rep, seed);
    json j = to_json(rec);
    j["state"] = state_opts.to_json();
    write_json_file(out, j);
    std::cout << "record written: " << settings.size() << " settings, n_rep " << n_rep
              << "\n";
    return kExitOk;
}

int cmd_reconstruct(const std::string& record_path, const std::string& method,
                    const BasisOptions& basis_opts, bool use_embedded_truth, int p_max,
                    const std::string& out) {
    json record_json = read_json_file(record_path);
    MeasurementRecord rec = record_from_json(record_json);
    std::optional<DensityMatrix> truth;
    if (use_embedded_truth) {
        if (!record_json.contains("state"))
            throw ConfigError("record carries no embedded state metadata");
        truth = StateOptions::from_json(record_json.at("state"));
    }

    json result;
    result["schema_version"] = kSchemaVersion;
    result["method"] = method;
    DensityMatrix estimate;
    double residual = 0.0;
    int iterations = 0;
    bool converged = true;

    if (method == "cat-pipeline") {
        CatPipelineResult res = cat_pipeline(rec, p_max);
        estimate = res.state;
        residual = res.residual;
        json comps = json::array();
        for (const cplx& a : res.alphas) comps.push_back({a.real(), a.imag()});
        result["alphas"] = comps;
    } else {
        BasisSpec basis = basis_opts.resolve();
        if (method == "imle") {
            if (basis.kind != BasisSpec::Kind::Fock)
                throw ConfigError("imle works in a fock basis");
            ImleResult fit = imle(rec, basis.m_c, 20000, 1e-13);
            estimate.basis = basis;
            estimate.entries = fit.rho;
            iterations = fit.iterations;
            converged = fit.converged;
            result["log_likelihood"] = fit.log_likelihood;
            result["monotone"] = fit.monotone;
            LinearSystem sys = assemble_system(rec, basis);
            residual = (sys.A.entries * vectorize(fit.rho) - sys.b.cast<cplx>()).norm();
            ConditionReport cond = condition_number(sys.A);
            result["kappa"] = cond.kappa;
            result["bound"] = error_bound(cond.kappa, basis.dimension(),
                                          estimate.entries.norm(), residual / sys.b.norm());
        } else {
            LinearSystem sys = assemble_system(rec, basis);
            if (method == "ls") {
                Eigen::MatrixXcd ls = least_squares(sys.A, sys.b);
                result["rho_ls"] = matrix_to_json(ls);
                estimate.basis = basis;
                estimate.entries = basis.kind == BasisSpec::Kind::Coherent
                                       ? project_physical_coherent(ls, basis.alphas)
                                       : project_physical(ls);
                residual =
                    (sys.A.entries * vectorize(estimate.entries) - sys.b.cast<cplx>()).norm();
            } else if (method == "fit") {
                FitResult fit = fit_physical(sys.A, sys.b);
                estimate.basis = basis;
                estimate.entries = fit.rho;
                residual = fit.objective;
                iterations = fit.iterations;
                converged = fit.converged;
            } else {
                throw ConfigError("unknown method '" + method + "'");
            }
            // practical bound: rank capped by the truncation dimension, noise
            // estimated from the residual
            ConditionReport cond = condition_number(sys.A);
            result["kappa"] = cond.kappa;
            result["bound"] = error_bound(cond.kappa, basis.dimension(),
                                          estimate.entries.norm(), residual / sys.b.norm());
        }
    }

    result["rho_phys"] = matrix_to_json(estimate.entries);
    result["basis"] = to_json(estimate.basis);
    result["residual"] = residual;
    result["iterations"] = iterations;
    result["converged"] = converged;
    if (truth) result["fidelity"] = fidelity(estimate, *truth);
    write_json_file(out, result);
    std::cout << "reconstruction (" << method << "): residual " << residual;
    if (truth) std::cout << ", fidelity " << result["fidelity"].get<double>();
    std::cout << "\n";
    return kExitOk;
}

int cmd_benchmark(int m_c, const std::string& ntot_list, int trials,
                  const std::string& schemes, uint64_t seed, double purity,
                  double lattice_margin, const std::string& out) {
    BenchmarkConfig cfg;
    cfg.m_c = m_c;
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.purity = purity;
    cfg.lattice_margin = lattice_margin;
    cfg.n_tot.clear();
    {
        std::stringstream ss(ntot_list);
        std::string t;
        while (std::getline(ss, t, ',')) cfg.n_tot.push_back(long(std::stod(t)));
    }
    if (!schemes.empty()) {
        cfg.schemes.clear();
        std::stringstream ss(schemes);
        std::string t;
        while (std::getline(ss, t, ',')) cfg.schemes.push_back(t);
    }
    BenchmarkResult res = run_benchmark(cfg);

    std::ofstream csv(out);
    if (!csv) throw ConfigError("cannot open " + out);
    csv << "scheme,n_tot,trial,infidelity\n";
    csv.precision(12);
    for (const auto& row : res.rows)
        csv << row.scheme << "," << row.n_tot << "," << row.trial << "," << row.infidelity
            << "\n";

    json meta;
    meta["schema_version"] = kSchemaVersion;
    meta["m_c"] = m_c;
    meta["trials"] = trials;
    meta["seed"] = seed;
    meta["purity"] = purity;
    meta["lattice_margin"] = lattice_margin;
    meta["n_tot"] = cfg.n_tot;
    for (const auto& [name, settings] : res.scheme_settings) {
        json arr = json::array();
        for (const auto& s : settings)
            arr.push_back({{"beta", {s.beta.real(), s.beta.imag()}}, {"n_c", s.n_c}});
        meta["settings"][name] = arr;
    }
    write_json_file(out + ".meta.json", meta);

    for (long nt : cfg.n_tot) {
        std::cout << "n_tot " << nt << ":";
        for (const auto& scheme : cfg.schemes)
            std::cout << "  " << scheme << " " << benchmark_median(res.rows, scheme, nt);
        std::cout << "\n";
    }
    return kExitOk;
}

int cmd_verify(const std::string& out) {
    std::vector<CheckResult> checks = run_verification_suite();
    bool all_pass = true;
    json report;
    report["schema_version"] = kSchemaVersion;
    json arr = json::array();
    for (const auto& c : checks) {
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail << "\n";
        all_pass = all_pass && c.pass;
        arr.push_back({{"name", c.name},
                       {"pass", c.pass},
                       {"value", c.value},
                       {"tolerance", c.threshold},
                       {"detail", c.detail}});
    }
    report["checks"] = std::move(arr);
    report["all_pass"] = all_pass;
    if (!out.empty()) write_json_file(out, report);
    return all_pass ? kExitOk : kExitVerifyFail;
}

int cmd_scan(const std::string& alphas_text, const std::string& grid_spec, bool with_fisher,
             double display_cap, const std::string& out_prefix) {
    std::vector<cplx> alphas = parse_complex_list(alphas_text);
    if (alphas.size() < 2) throw ConfigError("scan: need at least two --alphas");
    BasisSpec basis = BasisSpec::coherent(alphas);
    std::vector<double> axis = parse_grid_spec(grid_spec);
    const int gn = int(axis.size());

    struct Row {
        double re, im, kappa, estimate;
        int deficient, capped;
    };
    std::vector<Row> rows(size_t(gn) * size_t(gn));
    parallel_for(gn * gn, [&](int idx) {
        const cplx beta(axis[size_t(idx % gn)], axis[size_t(idx / gn)]);
        MeasurementSetting s{beta, default_ncut(beta, basis)};
        ConditionReport rep = condition_number(build_sensing({s}, basis));
        const bool deficient = !std::isfinite(rep.kappa);
        rows[size_t(idx)] = {beta.real(),
                             beta.imag(),
                             rep.kappa,
                             cn_estimate_cat(alphas, beta),
                             deficient ? 1 : 0,
                             (!deficient && rep.kappa > display_cap) ? 1 : 0};
    });
    {
        std::ofstream csv(out_prefix + "_kappa.csv");
        if (!csv) throw ConfigError("cannot open " + out_prefix + "_kappa.csv");
        csv << "beta_re,beta_im,kappa,estimate,rank_deficient,above_cap\n";
        csv.precision(12);
        for (const auto& r : rows)
            csv << r.re << "," << r.im << "," << r.kappa << "," << r.estimate << ","
                << r.deficient << "," << r.capped << "\n";
    }

    if (with_fisher) {
        const int p = int(alphas.size());
        Eigen::MatrixXcd mixed = Eigen::MatrixXcd::Identity(p, p);
        DensityMatrix cat = cat_density(alphas, mixed);
        std::vector<cplx> grid;
        for (int iy = 0; iy < gn; ++iy)
            for (int ix = 0; ix < gn; ++ix)
                grid.emplace_back(axis[size_t(ix)], axis[size_t(iy)]);
        FisherMap map = fisher_det_map(cat.entries, alphas, grid);
        std::vector<std::vector<double>> frows;
        for (size_t i = 0; i < grid.size(); ++i)
            frows.push_back({grid[i].real(), grid[i].imag(), map.det_values[i]});
        write_csv(out_prefix + "_fisher.csv", "beta_re,beta_im,det_fisher", frows);
        json meta;
        meta["schema_version"] = kSchemaVersion;
        meta["alphas"] = json::array();
        for (const cplx& a : alphas) meta["alphas"].push_back({a.real(), a.imag()});
        meta["grid"] = grid_spec;
        meta["state"] = "maximally mixed cat";
        write_json_file(out_prefix + "_fisher.meta.json", meta);
    }
    std::cout << "scan written with prefix " << out_prefix << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Measurement design, simulation, and reconstruction for "
                 "excitation-counting tomography of a bosonic mode"};
    app.require_subcommand(1);
    app.set_config("--config");

    BasisOptions basis_opts;
    StateOptions state_opts;

    auto* design = app.add_subcommand("design", "generate or optimize measurement settings");
    std::string family, scan_radius, out = "design.json", out_csv;
    bool optimize = false, greedy = false;
    int n_beta = 0, starts = 8, target_mc = 1;
    double threshold = 50.0;
    uint64_t seed = 1;
    design->add_option("--basis", basis_opts.basis, "fock:M | cat | dfock:M");
    design->add_option("--alphas", basis_opts.alphas, "comma-separated complex components");
    design->add_option("--family", family, "ring family: hrc | frc");
    design->add_option("--scan-radius", scan_radius, "lo:hi:step radius grid");
    design->add_flag("--optimize", optimize, "gradient descent from random starts");
    design->add_option("--n-beta", n_beta, "number of settings for --optimize");
    design->add_option("--starts", starts, "random restarts for --optimize");
    design->add_flag("--greedy", greedy, "incremental greedy selection");
    design->add_option("--target-mc", target_mc, "per-component cutoff goal for --greedy");
    design->add_option("--threshold", threshold, "kappa threshold for raising m_c");
    design->add_option("--seed", seed, "random seed");
    design->add_option("--out", out, "design report path");
    design->add_option("--out-csv", out_csv, "radius scan CSV path");

    auto* simulate = app.add_subcommand("simulate", "sample measurement records");
    std::string design_path, betas, record_out = "record.json";
    long n_rep = 10000;
    uint64_t sim_seed = 1;
    simulate->add_option("--design", design_path, "design report with settings");
    simulate->add_option("--betas", betas, "explicit displacement list");
    simulate->add_option("--state", state_opts.state, "random | cat | fock");
    simulate->add_option("--mc", state_opts.mc, "cutoff for random/fock states");
    simulate->add_option("--purity", state_opts.purity, "purity knob for random states");
    simulate->add_option("--state-seed", state_opts.state_seed, "state draw seed");
    simulate->add_option("--alphas", state_opts.alphas, "cat components");
    simulate->add_option("--cat-kind", state_opts.cat_kind, "even | mixed");
    simulate->add_option("--fock-n", state_opts.fock_n, "fock state index");
    simulate->add_option("--n-rep", n_rep, "repetitions per setting (0 = exact)");
    simulate->add_option("--seed", sim_seed, "sampling seed");
    simulate->add_option("--out", record_out, "record path");

    auto* reconstruct = app.add_subcommand("reconstruct", "estimate the state from a record");
    std::string record_path, method = "fit", result_out = "result.json";
    bool embedded_truth = false;
    int p_max = 4;
    reconstruct->add_option("--record", record_path, "measurement record")->required();
    reconstruct->add_option("--method", method, "ls | fit | imle | cat-pipeline");
    reconstruct->add_option("--basis", basis_opts.basis, "reconstruction basis");
    reconstruct->add_option("--alphas", basis_opts.alphas, "cat basis components");
    reconstruct->add_flag("--truth-embedded", embedded_truth,
                          "score fidelity against the record's embedded state");
    reconstruct->add_option("--p-max", p_max, "component cap for cat-pipeline");
    reconstruct->add_option("--out", result_out, "result path");

    auto* benchmark = app.add_subcommand("benchmark", "compare schemes on simulated data");
    int bench_mc = 2, trials = 5;
    std::string ntot = "1e5,1e6", schemes, bench_out = "benchmark.csv";
    uint64_t bench_seed = 1;
    double bench_purity = 0.5, bench_margin = 1.0;
    benchmark->add_option("--mc", bench_mc, "state and reconstruction cutoff");
    benchmark->add_option("--ntot", ntot, "comma-separated total measurement counts");
    benchmark->add_option("--trials", trials, "trials per point");
    benchmark->add_option("--schemes", schemes,
                          "subset of wigner-lattice,wigner-optimized,qn-optimized");
    benchmark->add_option("--seed", bench_seed, "seed");
    benchmark->add_option("--purity", bench_purity, "true-state purity knob");
    benchmark->add_option("--lattice-margin", bench_margin,
                          "wigner lattice spans +-(sqrt(m_c) + margin)");
    benchmark->add_option("--out", bench_out, "scatter CSV path");

    auto* verify = app.add_subcommand("verify", "run the numeric verification suite");
    std::string verify_out = "verify.json";
    verify->add_option("--out", verify_out, "report path");

    auto* scan = app.add_subcommand("scan", "condition-number and Fisher maps over beta");
    std::string scan_alphas, grid_spec = "-4:4:0.2", out_prefix = "scan";
    bool with_fisher = false;
    double display_cap = 100.0;
    scan->add_option("--alphas", scan_alphas, "cat components")->required();
    scan->add_option("--grid", grid_spec, "lo:hi:step for both axes");
    scan->add_flag("--fisher", with_fisher, "also emit the Fisher determinant map");
    scan->add_option("--cap", display_cap, "display cap mirrored in the above_cap column");
    scan->add_option("--out-prefix", out_prefix, "output file prefix");

    try {
        app.parse(argc, argv);
        if (design->parsed())
            return cmd_design(basis_opts, family, scan_radius, optimize, n_beta, starts,
                              greedy, target_mc, threshold, seed, out, out_csv);
        if (simulate->parsed())
            return cmd_simulate(design_path, betas, state_opts, n_rep, sim_seed, record_out);
        if (reconstruct->parsed())
            return cmd_reconstruct(record_path, method, basis_opts, embedded_truth, p_max,
                                   result_out);
        if (benchmark->parsed())
            return cmd_benchmark(bench_mc, ntot, trials, schemes, bench_seed, bench_purity,
                                 bench_margin, bench_out);
        if (verify->parsed()) return cmd_verify(verify_out);
        if (scan->parsed())
            return cmd_scan(scan_alphas, grid_spec, with_fisher, display_cap, out_prefix);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    } catch (const IncompleteSensingError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIncomplete;
    } catch (const GreedyBudgetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitOptimizer;
    } catch (const DegenerateSpectrumError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitOptimizer;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
