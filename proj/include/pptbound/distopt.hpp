#pragma once

#include <cstdint>
#include <optional>

#include "pptbound/bounds.hpp"
#include "pptbound/pbit.hpp"

namespace pptbound {

/// Budget of the stochastic distance minimizer. The step halves after
/// `decay_after` consecutive rejections; a restart stops when the step falls
/// below stop_step or the iteration budget runs out.
struct OptOptions {
    std::size_t restarts = 16;
    std::size_t max_iters = 2000;
    double init_step = 0.3;
    std::size_t decay_after = 50;
    double stop_step = 1e-4;
    std::uint64_t base_seed = 0;
};

struct RestartRecord {
    std::uint64_t seed;
    double final_distance;
    std::vector<double> accepted;  // strictly decreasing distance trace
};

struct OptResult {
    double upper;  // re-verified trace norm at the best parameters
    PbitParams best_params;
    std::vector<RestartRecord> per_restart;
};

/// Analytic lower bounds next to the optimizer's upper bound; construction
/// fails with ConsistencyError if lower > upper + 1e-9.
struct SandwichResult {
    double lower;
    double upper;
    double prop1_lower;
    std::optional<double> theorem1_lower;
    std::optional<double> hphh_lower;
    PbitParams best_params;
    std::vector<RestartRecord> per_restart;
};

/// Initial pbit parameters from the singular value decomposition of
/// 2 A_0011; reconstructs true private states exactly (up to roundoff).
PbitParams warm_start(const QuantumState& s);

/// Minimize ||s - gamma||_1 over private states of matching shield
/// dimensions: restart 0 is warm-started, later restarts draw random
/// parameters; proposals twist the unitaries by exp(i step G) and mix the
/// shield toward a random pure state. Deterministic in base_seed.
OptResult distance_to_pbit_upper(const QuantumState& s, const OptOptions& opts);

/// Pair the best analytic lower bound with the optimizer's upper bound.
SandwichResult sandwich(const QuantumState& s, const OptOptions& opts,
                        std::optional<std::size_t> hphh_shield_d = std::nullopt);

} // namespace pptbound
