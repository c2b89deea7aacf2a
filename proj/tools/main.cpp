#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pptbound/bounds.hpp"
#include "pptbound/distopt.hpp"
#include "pptbound/families.hpp"
#include "pptbound/pbit.hpp"
#include "pptbound/stateio.hpp"

namespace {

constexpr const char* TOOL_VERSION = "0.1.0";

using namespace pptbound;

struct GlobalOptions {
    std::uint64_t seed = 0;
    double tolerance = tol::PSD_TOL;
    std::size_t dim_cap = DEFAULT_DIM_CAP;
    bool quiet = false;
};

void note(const GlobalOptions& global, const std::string& line) {
    if (!global.quiet) std::cerr << line << '\n';
}

std::string dims_string(const std::vector<FactorLabel>& factors) {
    std::ostringstream out;
    for (std::size_t f = 0; f < factors.size(); ++f) {
        if (f > 0) out << 'x';
        out << factors[f].dim;
    }
    return out.str();
}

std::string params_of(const std::map<std::string, std::string>& metadata) {
    const auto it = metadata.find("params");
    return it == metadata.end() ? std::string{} : it->second;
}

std::string family_of(const std::map<std::string, std::string>& metadata) {
    const auto it = metadata.find("family");
    return it == metadata.end() ? std::string{"unknown"} : it->second;
}

std::optional<std::size_t> hphh_hint(const std::map<std::string, std::string>& metadata) {
    if (family_of(metadata).rfind("hphh", 0) != 0) return std::nullopt;
    const auto it = metadata.find("shield_d");
    if (it == metadata.end()) return std::nullopt;
    return static_cast<std::size_t>(std::stoull(it->second));
}

std::optional<std::uint64_t> seed_of(const std::map<std::string, std::string>& metadata) {
    const auto it = metadata.find("seed");
    if (it == metadata.end()) return std::nullopt;
    return std::stoull(it->second);
}

ComplexMatrix read_unitary_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("invalid JSON in " + path.string() + ": " + e.what());
    }
    if (j.is_object() && j.contains("matrix")) return matrix_from_json(j["matrix"]);
    return matrix_from_json(j);
}

void append_csv(const std::filesystem::path& path, const std::vector<ReportRow>& rows) {
    const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
    std::ofstream out(path, std::ios::app);
    if (!out) throw IoError("cannot write " + path.string());
    if (fresh) out << report_csv_header() << '\n';
    for (const auto& row : rows) out << report_csv_row(row) << '\n';
}

// ---------------------------------------------------------------- construct

struct ConstructArgs {
    std::string family;
    std::string out_path;
    std::size_t d = 2, l = 1, m = 1, n = 1, shield_d = 2;
    double p = 0.25, q = 0.03, r = 0.03;
    std::string unitary_path;
};

int cmd_construct(const ConstructArgs& args, const GlobalOptions& global) {
    std::map<std::string, std::string> metadata = {{"family", args.family},
                                                   {"tool_version", TOOL_VERSION}};
    std::ostringstream params;
    std::optional<QuantumState> state;

    if (args.family == "hhho") {
        state = hhho_state({args.d, args.l, args.m, args.p}, global.dim_cap);
        params << "d=" << args.d << ";l=" << args.l << ";m=" << args.m << ";p=" << args.p;
    } else if (args.family == "cckkl-a") {
        state = cckkl_a_state(args.q, args.r);
        params << "q=" << args.q << ";r=" << args.r;
    } else if (args.family == "cckkl-a-power") {
        state = cckkl_a_power(args.q, args.r, args.n, global.dim_cap);
        params << "q=" << args.q << ";r=" << args.r << ";n=" << args.n;
        metadata["paper_norm_ratio"] =
            format_sig12(cckkl_a_power_norm_literal(args.q, args.r, args.n) /
                         cckkl_a_power_norm_exact(args.q, args.r, args.n));
    } else if (args.family == "cckkl-b") {
        state = cckkl_b_state(args.q);
        params << "q=" << args.q;
    } else if (args.family == "hphh-fourier" || args.family == "hphh-unitary-file") {
        const ComplexMatrix u = args.family == "hphh-fourier"
                                    ? fourier_unitary(args.d)
                                    : read_unitary_file(args.unitary_path);
        const HphhParams hp = hphh_params(u);
        state = hphh_from_unitary(u, global.dim_cap);
        params << "d=" << u.rows();
        metadata["shield_d"] = std::to_string(u.rows());
        metadata["w_norm"] = format_sig12(hp.w_norm);
        metadata["p"] = format_sig12(hp.p);
        metadata["key_rate_lower"] = format_sig12(hphh_key_rate_lower(hp).clamped);
    } else if (args.family == "pbit-random") {
        state = make_pbit(random_pbit_params(args.shield_d, args.shield_d, global.seed));
        params << "shield-d=" << args.shield_d;
        metadata["seed"] = std::to_string(global.seed);
    } else {
        throw ParameterError("unknown family: " + args.family);
    }

    metadata["params"] = params.str();
    write_state_file(args.out_path, state->matrix(), state->factors(), metadata);
    note(global, "wrote " + args.out_path + " (" + dims_string(state->factors()) + ")");
    return 0;
}

// ------------------------------------------------------------------- verify

int cmd_verify(const std::string& in_path, const GlobalOptions& global) {
    const StateFile file = read_state_file(in_path);

    const double trace_dev = std::abs(mat_trace(file.matrix) - Complex{1.0, 0.0});
    const double herm_resid = hermiticity_residual(file.matrix);
    const auto evals = herm_eigvals(file.matrix);
    const double min_eig = evals.front();
    const bool valid = trace_dev <= tol::EIG_TOL && herm_resid <= tol::EIG_TOL &&
                       min_eig >= -global.tolerance * double(file.matrix.rows());

    nlohmann::json j = {{"trace_deviation", format_sig12(trace_dev)},
                        {"hermiticity_residual", format_sig12(herm_resid)},
                        {"min_eigenvalue", format_sig12(min_eig)},
                        {"valid_state", valid}};

    if (valid) {
        const QuantumState state = QuantumState::from_parts(file.matrix, file.factors);
        const PptVerdict verdict = is_ppt(state, global.tolerance);
        j["is_ppt"] = verdict.ppt;  // informational, never gates the exit code
        j["min_pt_eigenvalue"] = format_sig12(verdict.min_eigenvalue);
        try {
            j["a0011_hermitian"] =
                hermiticity_residual(blocks(state).block(0, 3)) <= tol::EIG_TOL;
        } catch (const ShapeError&) {
            j["a0011_hermitian"] = nullptr;  // no canonical key factors
        }
    }

    std::cout << j.dump(1) << '\n';
    note(global, std::string("state invariants: ") + (valid ? "pass" : "FAIL"));
    return valid ? 0 : 3;
}

// -------------------------------------------------------------------- bound

int cmd_bound(const std::string& in_path, const std::string& csv_path,
              const GlobalOptions&) {
    const StateFile file = read_state_file(in_path);
    const QuantumState state = to_state(file);
    const BoundReport report = theorem1_bound(state, hphh_hint(file.metadata));
    const ReportRow row = make_report_row(report, family_of(file.metadata),
                                          params_of(file.metadata), seed_of(file.metadata),
                                          std::nullopt);
    std::cout << report_row_json(row).dump(1) << '\n';
    if (!csv_path.empty()) append_csv(csv_path, {row});
    return 0;
}

// ----------------------------------------------------------------- optimize

nlohmann::json sandwich_json(const SandwichResult& res, std::uint64_t base_seed) {
    nlohmann::json per_restart = nlohmann::json::array();
    for (std::size_t r = 0; r < res.per_restart.size(); ++r) {
        per_restart.push_back({{"restart", r},
                               {"seed", res.per_restart[r].seed},
                               {"final_distance", res.per_restart[r].final_distance}});
    }
    return {{"lower", res.lower},
            {"upper", res.upper},
            {"prop1_lower", res.prop1_lower},
            {"theorem1_lower",
             res.theorem1_lower ? nlohmann::json(*res.theorem1_lower) : nullptr},
            {"hphh_lower", res.hphh_lower ? nlohmann::json(*res.hphh_lower) : nullptr},
            {"base_seed", base_seed},
            {"per_restart", std::move(per_restart)},
            {"best_params",
             {{"u00", matrix_to_json(res.best_params.u00)},
              {"u11", matrix_to_json(res.best_params.u11)},
              {"shield", matrix_to_json(res.best_params.shield.matrix())}}}};
}

int cmd_optimize(const std::string& in_path, const OptOptions& opts,
                 const GlobalOptions& global) {
    const StateFile file = read_state_file(in_path);
    const QuantumState state = to_state(file);
    const SandwichResult res = sandwich(state, opts, hphh_hint(file.metadata));
    std::cout << sandwich_json(res, opts.base_seed).dump(1) << '\n';
    note(global, "sandwich: " + format_sig12(res.lower) + " <= distance <= " +
                     format_sig12(res.upper));
    return 0;
}

// -------------------------------------------------------------------- sweep

struct SweepArgs {
    std::string family = "hphh-fourier";
    std::string range = "2..4";
    std::string csv_path;
    bool optimize = false;
    OptOptions opts;
};

int cmd_sweep(const SweepArgs& args, const GlobalOptions& global) {
    if (args.family != "hphh-fourier") {
        throw ParameterError("sweep supports the hphh-fourier family only");
    }
    const auto sep = args.range.find("..");
    if (sep == std::string::npos) throw ParameterError("range must look like 2..4");
    const std::size_t lo = std::stoull(args.range.substr(0, sep));
    const std::size_t hi = std::stoull(args.range.substr(sep + 2));
    if (lo < 2 || hi < lo) throw ParameterError("range must satisfy 2 <= lo <= hi");

    bool warned = false;
    std::vector<ReportRow> rows;
    for (std::size_t d = lo; d <= hi; ++d) {
        ReportRow row;
        row.family = args.family;
        row.params = "d=" + std::to_string(d);
        try {
            const QuantumState state = hphh_from_unitary(fourier_unitary(d), global.dim_cap);
            const BoundReport report = theorem1_bound(state, d);
            std::optional<double> upper;
            if (args.optimize) {
                OptOptions opts = args.opts;
                opts.base_seed = Rng::child_seed(global.seed, d);
                upper = distance_to_pbit_upper(state, opts).upper;
            }
            row = make_report_row(report, args.family, "d=" + std::to_string(d),
                                  args.optimize ? std::optional<std::uint64_t>(global.seed)
                                                : std::nullopt,
                                  upper);
        } catch (const SizeError& e) {
            row.dims = "";
            row.error = e.what();
            note(global, "warning: d=" + std::to_string(d) + ": " + e.what());
            warned = true;
        }
        rows.push_back(std::move(row));
    }

    nlohmann::json out = nlohmann::json::array();
    for (const auto& row : rows) out.push_back(report_row_json(row));
    std::cout << out.dump(1) << '\n';
    if (!args.csv_path.empty()) append_csv(args.csv_path, rows);
    if (warned) note(global, "sweep finished with warnings");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"trace-norm distance bounds between PPT states and private states"};
    app.require_subcommand(1);

    GlobalOptions global;
    app.add_option("--seed", global.seed, "base seed for seeded commands");
    app.add_option("--tol", global.tolerance, "PPT / positivity tolerance");
    app.add_option("--dim-cap", global.dim_cap, "maximum state dimension");
    app.add_flag("--quiet", global.quiet, "suppress progress notes on stderr");

    ConstructArgs cons;
    CLI::App* construct = app.add_subcommand("construct", "build a family state file");
    construct->add_option("family", cons.family,
                          "hhho | cckkl-a | cckkl-a-power | cckkl-b | hphh-fourier | "
                          "hphh-unitary-file | pbit-random")
        ->required();
    construct->add_option("--out", cons.out_path, "output state file")->required();
    construct->add_option("--d", cons.d, "local dimension");
    construct->add_option("--l", cons.l, "inner tensor power");
    construct->add_option("--m", cons.m, "outer tensor power");
    construct->add_option("--n", cons.n, "block tensor power");
    construct->add_option("--p", cons.p, "mixing weight");
    construct->add_option("--q", cons.q, "weight q");
    construct->add_option("--r", cons.r, "weight r");
    construct->add_option("--shield-d", cons.shield_d, "shield dimension per side");
    construct->add_option("--unitary", cons.unitary_path, "JSON file with a unitary matrix");

    std::string in_path;
    CLI::App* verify = app.add_subcommand("verify", "check state-file invariants");
    verify->add_option("--in", in_path, "state file")->required();

    std::string bound_in, bound_csv;
    CLI::App* bound = app.add_subcommand("bound", "compute the bound report for a state");
    bound->add_option("--in", bound_in, "state file")->required();
    bound->add_option("--csv", bound_csv, "append the report row to this CSV file");

    std::string opt_in;
    OptOptions opt_opts;
    CLI::App* optimize = app.add_subcommand("optimize", "sandwich the distance to private states");
    optimize->add_option("--in", opt_in, "state file")->required();
    optimize->add_option("--restarts", opt_opts.restarts, "optimizer restarts");
    optimize->add_option("--iters", opt_opts.max_iters, "iterations per restart");

    SweepArgs sweep;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "bound reports across a dimension range");
    sweep_cmd->add_option("--family", sweep.family, "family to sweep (hphh-fourier)");
    sweep_cmd->add_option("--d-range", sweep.range, "dimension range lo..hi");
    sweep_cmd->add_option("--csv", sweep.csv_path, "CSV output file");
    sweep_cmd->add_flag("--optimize", sweep.optimize, "also run the optimizer per row");
    sweep_cmd->add_option("--restarts", sweep.opts.restarts, "optimizer restarts");
    sweep_cmd->add_option("--iters", sweep.opts.max_iters, "iterations per restart");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*construct) return cmd_construct(cons, global);
        if (*verify) return cmd_verify(in_path, global);
        if (*bound) return cmd_bound(bound_in, bound_csv, global);
        if (*optimize) {
            opt_opts.base_seed = global.seed;
            return cmd_optimize(opt_in, opt_opts, global);
        }
        if (*sweep_cmd) return cmd_sweep(sweep, global);
    } catch (const ConsistencyError& e) {
        std::cerr << "internal consistency failure: " << e.what() << '\n';
        return 5;
    } catch (const IoError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 3;
    } catch (const NormalizationError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 3;
    } catch (const NotPsdError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 3;
    } catch (const ParameterError& e) {
        std::cerr << "parameter error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "computation error: " << e.what() << '\n';
        return 4;
    }
    return 2;
}
