#include "pptbound/stateio.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pptbound {

std::string owner_name(Owner owner) {
    switch (owner) {
        case Owner::alice: return "alice";
        case Owner::bob: return "bob";
        case Owner::eve: return "eve";
    }
    return "alice";
}

std::string role_name(Role role) { return role == Role::key ? "key" : "shield"; }

Owner owner_from_name(const std::string& name) {
    if (name == "alice") return Owner::alice;
    if (name == "bob") return Owner::bob;
    if (name == "eve") return Owner::eve;
    throw IoError("unknown owner: " + name);
}

Role role_from_name(const std::string& name) {
    if (name == "key") return Role::key;
    if (name == "shield") return Role::shield;
    throw IoError("unknown role: " + name);
}

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const Complex v = m(i, j);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                throw IoError("matrix contains a non-finite entry");
            }
            row.push_back(nlohmann::json::array({v.real(), v.imag()}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty()) throw IoError("matrix must be a non-empty array of rows");
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    if (cols == 0) throw IoError("matrix rows must be non-empty arrays");
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        const auto& row = j[i];
        if (!row.is_array() || row.size() != cols) {
            throw IoError("matrix rows must all have the same length");
        }
        for (std::size_t k = 0; k < cols; ++k) {
            const auto& entry = row[k];
            if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
                !entry[1].is_number()) {
                throw IoError("matrix entries must be [re, im] number pairs");
            }
            const double re = entry[0].get<double>();
            const double im = entry[1].get<double>();
            if (!std::isfinite(re) || !std::isfinite(im)) {
                throw IoError("matrix entries must be finite");
            }
            m(i, k) = Complex{re, im};
        }
    }
    return m;
}

StateFile read_state_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("invalid JSON in " + path.string() + ": " + e.what());
    }
    if (!j.is_object()) throw IoError("state file must be a JSON object");
    if (!j.contains("schema_version") || j["schema_version"] != "1") {
        throw IoError("unsupported or missing schema_version (expected \"1\")");
    }
    if (!j.contains("dims") || !j["dims"].is_array() || j["dims"].empty()) {
        throw IoError("state file needs a non-empty dims array");
    }

    StateFile file{ComplexMatrix(1, 1), {}, {}};
    for (const auto& d : j["dims"]) {
        if (!d.is_object() || !d.contains("dim") || !d.contains("owner") || !d.contains("role")) {
            throw IoError("each dims entry needs dim, owner and role");
        }
        if (!d["dim"].is_number_unsigned() || d["dim"].get<std::size_t>() < 1) {
            throw IoError("factor dims must be positive integers");
        }
        file.factors.push_back({d["dim"].get<std::size_t>(),
                                owner_from_name(d["owner"].get<std::string>()),
                                role_from_name(d["role"].get<std::string>())});
    }

    if (!j.contains("matrix")) throw IoError("state file needs a matrix");
    file.matrix = matrix_from_json(j["matrix"]);
    if (file.matrix.rows() != file.matrix.cols()) {
        throw IoError("state matrix must be square");
    }
    if (factors_dim(file.factors) != file.matrix.rows()) {
        throw IoError("dims do not multiply to the matrix size");
    }

    if (j.contains("metadata")) {
        if (!j["metadata"].is_object()) throw IoError("metadata must be an object of strings");
        for (const auto& [key, value] : j["metadata"].items()) {
            if (!value.is_string()) throw IoError("metadata values must be strings");
            file.metadata[key] = value.get<std::string>();
        }
    }
    return file;
}

void write_state_file(const std::filesystem::path& path, const ComplexMatrix& matrix,
                      const std::vector<FactorLabel>& factors,
                      const std::map<std::string, std::string>& metadata) {
    nlohmann::json dims = nlohmann::json::array();
    for (const auto& f : factors) {
        dims.push_back({{"dim", f.dim}, {"owner", owner_name(f.owner)}, {"role", role_name(f.role)}});
    }
    const nlohmann::json j = {{"schema_version", "1"},
                              {"dims", std::move(dims)},
                              {"matrix", matrix_to_json(matrix)},
                              {"metadata", metadata}};
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(1) << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

QuantumState to_state(const StateFile& file) {
    return QuantumState::checked(file.matrix, file.factors);
}

std::string format_sig12(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    std::string out = buffer;
    if (out.find_first_of(".eE") == std::string::npos &&
        out.find_first_of("0123456789") != std::string::npos) {
        out += ".0";
    }
    return out;
}

std::string report_csv_header() {
    return "family,params,dims,is_ppt,min_pt_eig,a0011_hermitian,a0011_norm,prop1_lower,"
           "theorem1_lower,hphh_lower,lemma1_margin,opt_upper,seed";
}

namespace {

std::string opt_field(const std::optional<double>& value) {
    return value.has_value() ? format_sig12(*value) : std::string{};
}

} // namespace

std::string report_csv_row(const ReportRow& row) {
    std::ostringstream out;
    out << row.family << ',' << row.params << ',' << row.dims << ',';
    if (row.error.has_value()) {
        // row-level failure: verdict columns stay empty
        out << ",,,,,,,,,";
        if (row.seed.has_value()) out << *row.seed;
        return out.str();
    }
    out << (row.is_ppt ? "true" : "false") << ',' << format_sig12(row.min_pt_eig) << ','
        << (row.a0011_hermitian ? "true" : "false") << ',' << format_sig12(row.a0011_norm) << ','
        << format_sig12(row.prop1_lower) << ',' << opt_field(row.theorem1_lower) << ','
        << opt_field(row.hphh_lower) << ',' << opt_field(row.lemma1_margin) << ','
        << opt_field(row.opt_upper) << ',';
    if (row.seed.has_value()) out << *row.seed;
    return out.str();
}

nlohmann::json report_row_json(const ReportRow& row) {
    nlohmann::json j = {{"family", row.family}, {"params", row.params}, {"dims", row.dims}};
    if (row.error.has_value()) {
        j["error"] = *row.error;
        if (row.seed.has_value()) j["seed"] = *row.seed;
        return j;
    }
    j["is_ppt"] = row.is_ppt;
    j["min_pt_eig"] = format_sig12(row.min_pt_eig);
    j["a0011_hermitian"] = row.a0011_hermitian;
    j["a0011_norm"] = format_sig12(row.a0011_norm);
    j["prop1_lower"] = format_sig12(row.prop1_lower);
    j["theorem1_lower"] =
        row.theorem1_lower ? nlohmann::json(format_sig12(*row.theorem1_lower)) : nullptr;
    j["hphh_lower"] = row.hphh_lower ? nlohmann::json(format_sig12(*row.hphh_lower)) : nullptr;
    j["lemma1_margin"] =
        row.lemma1_margin ? nlohmann::json(format_sig12(*row.lemma1_margin)) : nullptr;
    j["opt_upper"] = row.opt_upper ? nlohmann::json(format_sig12(*row.opt_upper)) : nullptr;
    if (row.seed.has_value()) j["seed"] = *row.seed;
    return j;
}

ReportRow make_report_row(const BoundReport& report, const std::string& family,
                          const std::string& params, std::optional<std::uint64_t> seed,
                          std::optional<double> opt_upper) {
    ReportRow row;
    row.family = family;
    row.params = params;
    std::ostringstream dims;
    for (std::size_t f = 0; f < report.dims.size(); ++f) {
        if (f > 0) dims << 'x';
        dims << report.dims[f].dim;
    }
    row.dims = dims.str();
    row.is_ppt = report.is_ppt;
    row.min_pt_eig = report.min_pt_eigenvalue;
    row.a0011_hermitian = report.a0011_hermitian;
    row.a0011_norm = report.a0011_norm;
    row.prop1_lower = report.prop1_lower;
    row.theorem1_lower = report.theorem1_lower;
    row.hphh_lower = report.hphh_lower;
    row.lemma1_margin = report.margins.lemma1;
    row.opt_upper = opt_upper;
    row.seed = seed;
    return row;
}

} // namespace pptbound
