#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace pptbound {

/// Deterministic random source. All randomness in the toolkit flows through
/// explicit seeds; the generator is std::mt19937_64 (algorithm fixed by the
/// standard) and the uniform/normal mappings below are hand-specified, so a
/// seed reproduces the same stream everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller (pairs cached).
    double normal();

    /// Complex with independent standard-normal real and imaginary parts.
    std::complex<double> cnormal() {
        const double re = normal();
        const double im = normal();
        return {re, im};
    }

    /// Derived seed for an independent child stream.
    static std::uint64_t child_seed(std::uint64_t base, std::uint64_t index) {
        return base * 1000003ULL + index;
    }

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

} // namespace pptbound
