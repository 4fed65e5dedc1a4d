#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace bnsl {

/**
 * Reproducible random source: std::mt19937_64, whose output sequence is
 * fixed by the C++ standard, plus conversions written out here because the
 * standard distributions are implementation-defined.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);
    /// Standard normal (Box-Muller, one value per call).
    double normal();

    /// Seed for a sub-stream identified by `path`, mixed with std::seed_seq.
    static std::uint64_t derive(std::uint64_t base, std::initializer_list<std::uint64_t> path);

private:
    std::mt19937_64 engine_;
};

}  // namespace bnsl
