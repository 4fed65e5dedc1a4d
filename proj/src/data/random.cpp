#include "bnsl/random.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace bnsl {

std::uint64_t Rng::below(std::uint64_t n) {
    // rejection sampling keeps the result unbiased
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = engine_();
    while (x >= limit) {
        x = engine_();
    }
    return x % n;
}

double Rng::normal() {
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t Rng::derive(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
    std::vector<std::uint32_t> words;
    words.push_back(static_cast<std::uint32_t>(base));
    words.push_back(static_cast<std::uint32_t>(base >> 32));
    for (std::uint64_t p : path) {
        words.push_back(static_cast<std::uint32_t>(p));
        words.push_back(static_cast<std::uint32_t>(p >> 32));
    }
    std::seed_seq seq(words.begin(), words.end());
    std::array<std::uint32_t, 2> out{};
    seq.generate(out.begin(), out.end());
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace bnsl
