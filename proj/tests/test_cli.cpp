#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

#include "cvtomo/io.hpp"
#include "cvtomo/reconstruct.hpp"

using namespace cvtomo;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(CVTOMO_BIN) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

struct Workdir {
    fs::path dir;
    Workdir() {
        dir = fs::temp_directory_path() / ("cvtomo_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(dir);
    }
    ~Workdir() { fs::remove_all(dir); }
    std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

}  // namespace

TEST_CASE("design: ring family scan emits CSV and a report") {
    Workdir wd;
    const std::string csv = wd / "scan.csv";
    const std::string rep = wd / "design.json";
    CHECK(run_cli("design --basis fock:4 --family hrc --scan-radius 0.5:12:0.25 --out-csv " +
                  csv + " --out " + rep) == 0);
    REQUIRE(fs::exists(csv));
    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "radius,kappa,merit");
    int lines = 0;
    for (std::string line; std::getline(in, line);) ++lines;
    CHECK(lines == 47);  // 0.5:12:0.25 inclusive

    json j = read_json_file(rep);
    CHECK(j.at("schema_version") == 1);
    CHECK(j.at("kappa").get<double>() > 1.0);
    CHECK(j.at("kappa").get<double>() < 5.0);
    CHECK(j.at("settings").size() == 5);  // HRC at m_c = 4
}

TEST_CASE("design: config errors exit with code 2") {
    CHECK(run_cli("design --basis cat --greedy --target-mc 1") == 2);  // missing alphas
    CHECK(run_cli("design --basis fock:2") == 2);                      // nothing to do
    CHECK(run_cli("design --basis fock:2 --family xyz") == 2);
    CHECK(run_cli("bogus-subcommand") == 2);
}

TEST_CASE("design: greedy run writes a per-step history") {
    Workdir wd;
    const std::string rep = wd / "greedy.json";
    CHECK(run_cli("design --basis cat --alphas \"2+0i,-2+0i\" --greedy --target-mc 1 "
                  "--threshold 50 --out " + rep) == 0);
    json j = read_json_file(rep);
    CHECK(j.at("basis").at("kind") == "displaced_fock");
    CHECK(j.at("history").size() >= 1);
    CHECK(j.at("kappa").get<double>() < 50.0);
}

TEST_CASE("simulate: determinism and schema") {
    Workdir wd;
    const std::string rec1 = wd / "a.json";
    const std::string rec2 = wd / "b.json";
    const std::string args = "simulate --betas \"1.2+0.4i,-0.8+1.0i,0.3-1.1i\" "
                             "--state random --mc 2 --purity 0.6 --state-seed 3 "
                             "--n-rep 10000 --seed 42 --out ";
    CHECK(run_cli(args + rec1) == 0);
    CHECK(run_cli(args + rec2) == 0);
    CHECK(slurp(rec1) == slurp(rec2));  // byte-identical at equal seeds

    json j = read_json_file(rec1);
    CHECK(j.at("schema_version") == 1);
    CHECK(j.at("seed") == 42);
    REQUIRE(j.at("settings").size() == 3);
    for (const auto& s : j.at("settings")) {
        CHECK(s.contains("beta"));
        CHECK(s.contains("n_c"));
        CHECK(s.at("n_rep") == 10000);
        long total = s.at("overflow").get<long>();
        for (long c : s.at("counts").get<std::vector<long>>()) total += c;
        CHECK(total == 10000);
    }
    MeasurementRecord rec = record_from_json(j);  // round-trips the schema
    CHECK(rec.settings.size() == 3);
}

TEST_CASE("pipeline: exact frequencies round-trip with fidelity 1") {
    Workdir wd;
    const std::string rec = wd / "exact.json";
    const std::string res = wd / "res.json";
    CHECK(run_cli("simulate --betas \"1.1+0.3i,-0.9+0.8i,0.2-1.2i\" --state random --mc 1 "
                  "--purity 0.3 --state-seed 5 --n-rep 0 --out " + rec) == 0);
    CHECK(run_cli("reconstruct --record " + rec + " --method ls --basis fock:1 "
                  "--truth-embedded --out " + res) == 0);
    json j = read_json_file(res);
    CHECK(j.at("fidelity").get<double>() > 1.0 - 1e-9);
    CHECK(j.at("bound").get<double>() <= 1.0);

    // noisy record through fit keeps high fidelity too
    const std::string rec2 = wd / "noisy.json";
    const std::string res2 = wd / "res2.json";
    CHECK(run_cli("simulate --betas \"1.1+0.3i,-0.9+0.8i,0.2-1.2i\" --state random --mc 1 "
                  "--purity 0.3 --state-seed 5 --n-rep 100000 --seed 9 --out " + rec2) == 0);
    CHECK(run_cli("reconstruct --record " + rec2 + " --method fit --basis fock:1 "
                  "--truth-embedded --out " + res2) == 0);
    CHECK(read_json_file(res2).at("fidelity").get<double>() > 0.995);
}

TEST_CASE("reconstruct: under-determined record exits with code 4") {
    Workdir wd;
    const std::string rec = wd / "short.json";
    CHECK(run_cli("simulate --betas \"1.2+0.4i,0.7-0.9i\" --state random --mc 2 "
                  "--state-seed 2 --n-rep 0 --out " + rec) == 0);
    CHECK(run_cli("reconstruct --record " + rec + " --method ls --basis fock:2 --out " +
                  (wd / "unused.json")) == 4);
}

TEST_CASE("reconstruct: cat pipeline returns component estimates") {
    Workdir wd;
    const std::string rec = wd / "cat.json";
    const std::string res = wd / "catres.json";
    CHECK(run_cli("simulate --betas \"0.2-1.3i,-0.8+1.1i,1.0+1.4i,1.75+0.2i,-1.7-0.3i\" "
                  "--state cat --alphas \"1.8+0i,-1.8+0i\" --cat-kind even "
                  "--n-rep 200000 --seed 12 --out " + rec) == 0);
    CHECK(run_cli("reconstruct --record " + rec + " --method cat-pipeline --p-max 2 --out " +
                  res) == 0);
    json j = read_json_file(res);
    REQUIRE(j.at("alphas").size() == 2);
    for (const auto& a : j.at("alphas")) {
        const double re = a.at(0).get<double>();
        const double im = a.at(1).get<double>();
        CHECK(std::abs(std::abs(re) - 1.8) < 0.15);
        CHECK(std::abs(im) < 0.15);
    }
}

TEST_CASE("scan: rank-deficient cells trace the perpendicular bisector") {
    Workdir wd;
    const std::string prefix = wd / "map";
    CHECK(run_cli("scan --alphas \"1.5+0i,-1.5+0i\" --grid -2:2:0.5 --out-prefix " + prefix) ==
          0);
    std::ifstream in(prefix + "_kappa.csv");
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header == "beta_re,beta_im,kappa,estimate,rank_deficient,above_cap");
    int deficient_on_axis = 0, deficient_off = 0;
    for (std::string line; std::getline(in, line);) {
        double re, im, kappa, est;
        int defic, capped;
        std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%d,%d", &re, &im, &kappa, &est, &defic,
                    &capped);
        const bool on_locus = std::abs(re) < 1e-9 || std::abs(im) < 1e-9;
        if (defic && on_locus) ++deficient_on_axis;
        if (defic && !on_locus) ++deficient_off;
    }
    CHECK(deficient_on_axis > 10);  // bisector (re = 0) and collinear (im = 0) lines
    CHECK(deficient_off == 0);
}

TEST_CASE("verify: suite passes and reports") {
    Workdir wd;
    const std::string rep = wd / "verify.json";
    CHECK(run_cli("verify --out " + rep) == 0);
    json j = read_json_file(rep);
    CHECK(j.at("all_pass") == true);
    CHECK(j.at("checks").size() == 4);
}

TEST_CASE("benchmark: medians improve with more measurements") {
    Workdir wd;
    const std::string csv = wd / "bench.csv";
    CHECK(run_cli("benchmark --mc 2 --ntot 1e4,1e6 --trials 3 "
                  "--schemes wigner-lattice,qn-optimized --seed 4 --out " + csv) == 0);
    REQUIRE(fs::exists(csv));
    REQUIRE(fs::exists(csv + ".meta.json"));
    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "scheme,n_tot,trial,infidelity");
    std::map<std::pair<std::string, long>, std::vector<double>> cells;
    for (std::string line; std::getline(in, line);) {
        const auto c1 = line.find(','), c2 = line.find(',', c1 + 1), c3 = line.find(',', c2 + 1);
        cells[{line.substr(0, c1), std::stol(line.substr(c1 + 1, c2 - c1 - 1))}].push_back(
            std::stod(line.substr(c3 + 1)));
    }
    for (const std::string scheme : {"wigner-lattice", "qn-optimized"}) {
        auto median = [&](long nt) {
            auto v = cells[{scheme, nt}];
            std::sort(v.begin(), v.end());
            return v[v.size() / 2];
        };
        CHECK(median(1000000) < median(10000));
    }
}
