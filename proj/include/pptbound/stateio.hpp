#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "pptbound/bounds.hpp"
#include "pptbound/qstate.hpp"

#include <json.hpp>

namespace pptbound {

/// On-disk state: schema_version "1", labeled dims, row-major matrix with
/// [re, im] entries, free-form string metadata. Matrices round-trip
/// bit-exactly; non-finite values are rejected on both paths.
struct StateFile {
    ComplexMatrix matrix;
    std::vector<FactorLabel> factors;
    std::map<std::string, std::string> metadata;
};

std::string owner_name(Owner owner);
std::string role_name(Role role);
Owner owner_from_name(const std::string& name);
Role role_from_name(const std::string& name);

/// Parse a state file; throws IoError on any schema or value violation.
/// The matrix is returned raw so callers can report invariant violations.
StateFile read_state_file(const std::filesystem::path& path);

void write_state_file(const std::filesystem::path& path, const ComplexMatrix& matrix,
                      const std::vector<FactorLabel>& factors,
                      const std::map<std::string, std::string>& metadata);

/// Promote file contents to a fully validated state.
QuantumState to_state(const StateFile& file);

nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);

/// One row of the tabular report emitted by the bound/sweep commands.
struct ReportRow {
    std::string family;
    std::string params;
    std::string dims;
    bool is_ppt = false;
    double min_pt_eig = 0.0;
    bool a0011_hermitian = false;
    double a0011_norm = 0.0;
    double prop1_lower = 0.0;
    std::optional<double> theorem1_lower;
    std::optional<double> hphh_lower;
    std::optional<double> lemma1_margin;
    std::optional<double> opt_upper;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> error;  // row-level failure note (sweep)
};

/// 12 significant digits, decimal point mandated, no locale surprises.
std::string format_sig12(double value);

std::string report_csv_header();
std::string report_csv_row(const ReportRow& row);
nlohmann::json report_row_json(const ReportRow& row);

ReportRow make_report_row(const BoundReport& report, const std::string& family,
                          const std::string& params, std::optional<std::uint64_t> seed,
                          std::optional<double> opt_upper);

} // namespace pptbound
