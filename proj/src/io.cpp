#include "cvtomo/io.hpp"

#include <fstream>
#include <sstream>

namespace cvtomo {

using nlohmann::json;

nlohmann::json to_json(const BasisSpec& basis) {
    json j;
    switch (basis.kind) {
        case BasisSpec::Kind::Fock:
            j["kind"] = "fock";
            j["m_c"] = basis.m_c;
            break;
        case BasisSpec::Kind::Coherent:
            j["kind"] = "coherent";
            break;
        case BasisSpec::Kind::DisplacedFock:
            j["kind"] = "displaced_fock";
            j["m_c"] = basis.m_c;
            break;
    }
    if (!basis.alphas.empty()) {
        json arr = json::array();
        for (const cplx& a : basis.alphas) arr.push_back({a.real(), a.imag()});
        j["alphas"] = arr;
    }
    return j;
}

BasisSpec basis_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    std::vector<cplx> alphas;
    if (j.contains("alphas"))
        for (const auto& a : j.at("alphas")) alphas.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
    if (kind == "fock") return BasisSpec::fock(j.at("m_c").get<int>());
    if (kind == "coherent") return BasisSpec::coherent(std::move(alphas));
    if (kind == "displaced_fock")
        return BasisSpec::displaced_fock(std::move(alphas), j.at("m_c").get<int>());
    throw ConfigError("basis_from_json: unknown kind '" + kind + "'");
}

nlohmann::json to_json(const MeasurementRecord& record) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["basis"] = to_json(record.basis);
    j["seed"] = record.seed;
    json settings = json::array();
    for (const auto& s : record.settings) {
        json js;
        js["beta"] = {s.beta.real(), s.beta.imag()};
        js["n_c"] = s.n_c;
        js["n_rep"] = s.n_rep;
        js["counts"] = s.counts;
        js["overflow"] = s.overflow;
        if (s.n_rep == 0) js["frequencies"] = s.frequencies;
        settings.push_back(std::move(js));
    }
    j["settings"] = std::move(settings);
    return j;
}

MeasurementRecord record_from_json(const json& j) {
    MeasurementRecord rec;
    rec.basis = basis_from_json(j.at("basis"));
    rec.seed = j.at("seed").get<uint64_t>();
    for (const auto& js : j.at("settings")) {
        SettingRecord s;
        s.beta = cplx(js.at("beta").at(0).get<double>(), js.at("beta").at(1).get<double>());
        s.n_c = js.at("n_c").get<int>();
        s.n_rep = js.at("n_rep").get<long>();
        s.counts = js.at("counts").get<std::vector<long>>();
        s.overflow = js.at("overflow").get<long>();
        if (js.contains("frequencies")) s.frequencies = js.at("frequencies").get<std::vector<double>>();
        if (s.n_rep > 0) {
            long total = s.overflow;
            for (long c : s.counts) total += c;
            if (total != s.n_rep)
                throw ConfigError("record_from_json: counts plus overflow must equal n_rep");
        }
        rec.settings.push_back(std::move(s));
    }
    return rec;
}

nlohmann::json to_json(const DesignReport& report) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["basis"] = to_json(report.basis);
    json settings = json::array();
    for (const auto& s : report.settings)
        settings.push_back({{"beta", {s.beta.real(), s.beta.imag()}}, {"n_c", s.n_c}});
    j["settings"] = std::move(settings);
    j["kappa"] = report.condition.kappa;
    j["sigma_max"] = report.condition.sigma_max;
    j["sigma_min"] = report.condition.sigma_min;
    j["rank"] = report.condition.rank;
    j["figure_of_merit"] = report.condition.figure_of_merit;
    json hist = json::array();
    for (const auto& [it, k] : report.history) hist.push_back({it, k});
    j["history"] = std::move(hist);
    j["converged"] = report.converged;
    return j;
}

DesignReport design_report_from_json(const json& j) {
    DesignReport rep;
    rep.basis = basis_from_json(j.at("basis"));
    for (const auto& js : j.at("settings"))
        rep.settings.push_back({cplx(js.at("beta").at(0).get<double>(), js.at("beta").at(1).get<double>()),
                                js.at("n_c").get<int>()});
    rep.condition.kappa = j.value("kappa", 0.0);
    rep.condition.sigma_max = j.value("sigma_max", 0.0);
    rep.condition.sigma_min = j.value("sigma_min", 0.0);
    rep.condition.rank = j.value("rank", 0);
    rep.condition.figure_of_merit = j.value("figure_of_merit", 0.0);
    if (j.contains("history"))
        for (const auto& h : j.at("history"))
            rep.history.emplace_back(h.at(0).get<int>(), h.at(1).get<double>());
    rep.converged = j.value("converged", false);
    return rep;
}

nlohmann::json to_json(const SensingMatrix& A) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["basis"] = to_json(A.basis);
    switch (A.mode) {
        case MeasureMode::Qn: j["mode"] = "qn"; break;
        case MeasureMode::Husimi: j["mode"] = "husimi"; break;
        case MeasureMode::Wigner: j["mode"] = "wigner"; break;
    }
    json settings = json::array();
    for (const auto& s : A.settings)
        settings.push_back({{"beta", {s.beta.real(), s.beta.imag()}}, {"n_c", s.n_c}});
    j["settings"] = std::move(settings);
    j["rows"] = A.entries.rows();
    j["cols"] = A.entries.cols();
    json entries = json::array();
    for (long r = 0; r < A.entries.rows(); ++r)
        for (long c = 0; c < A.entries.cols(); ++c)
            entries.push_back({A.entries(r, c).real(), A.entries(r, c).imag()});
    j["entries"] = std::move(entries);
    return j;
}

nlohmann::json matrix_to_json(const Eigen::MatrixXcd& m) {
    json rows = json::array();
    for (long r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (long c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXcd matrix_from_json(const json& j) {
    const long rows = long(j.size());
    const long cols = rows > 0 ? long(j.at(0).size()) : 0;
    Eigen::MatrixXcd m(rows, cols);
    for (long r = 0; r < rows; ++r)
        for (long c = 0; c < cols; ++c)
            m(r, c) = cplx(j.at(size_t(r)).at(size_t(c)).at(0).get<double>(),
                           j.at(size_t(r)).at(size_t(c)).at(1).get<double>());
    return m;
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open for reading: " + path);
    json j;
    in >> j;
    return j;
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out << header << "\n";
    out.precision(17);
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
}

cplx parse_complex(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw ConfigError("parse_complex: empty token");
    // split at the last +/- that is not an exponent sign and not leading
    size_t split = std::string::npos;
    for (size_t i = s.size(); i-- > 1;) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    auto to_num = [](std::string t) -> double {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        size_t used = 0;
        double v = std::stod(t, &used);
        if (used != t.size()) throw ConfigError("parse_complex: bad number '" + t + "'");
        return v;
    };
    if (s.back() == 'i' || s.back() == 'I') {
        s.pop_back();
        if (split == std::string::npos) return cplx(0.0, to_num(s));
        return cplx(to_num(s.substr(0, split)), to_num(s.substr(split)));
    }
    if (split != std::string::npos && (s.find('i') != std::string::npos))
        throw ConfigError("parse_complex: malformed '" + text + "'");
    return cplx(to_num(s), 0.0);
}

std::vector<cplx> parse_complex_list(const std::string& text) {
    std::vector<cplx> out;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        out.push_back(parse_complex(token));
    }
    return out;
}

std::string format_complex(cplx z) {
    std::ostringstream out;
    out.precision(12);
    out << z.real() << (z.imag() >= 0 ? "+" : "") << z.imag() << "i";
    return out.str();
}

}  // namespace cvtomo
