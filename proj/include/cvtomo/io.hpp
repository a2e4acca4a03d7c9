#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "cvtomo/design.hpp"
#include "cvtomo/sensing.hpp"
#include "cvtomo/statesim.hpp"

namespace cvtomo {

constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const BasisSpec& basis);
BasisSpec basis_from_json(const nlohmann::json& j);

nlohmann::json to_json(const MeasurementRecord& record);
MeasurementRecord record_from_json(const nlohmann::json& j);

nlohmann::json to_json(const DesignReport& report);
DesignReport design_report_from_json(const nlohmann::json& j);

/// {basis, settings, mode, entries as [re, im] pairs, row-major}.
nlohmann::json to_json(const SensingMatrix& A);

nlohmann::json matrix_to_json(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd matrix_from_json(const nlohmann::json& j);

void write_json_file(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& path);

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows);

/// "1.5-0.3i", "-2+0i", "2", "1i" forms.
cplx parse_complex(const std::string& text);
std::vector<cplx> parse_complex_list(const std::string& text);
std::string format_complex(cplx z);

}  // namespace cvtomo
