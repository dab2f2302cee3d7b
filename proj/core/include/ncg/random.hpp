#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace ncg {

// All randomness in the project flows through mt19937_64, whose output
// sequence is pinned by the standard, so runs reproduce bit-for-bit across
// platforms. The generator name travels with every output artifact.
using rng_engine = std::mt19937_64;
inline constexpr const char* rng_name = "mt19937_64";

// 53-bit uniform in [0, 1). One engine call.
inline double unit_uniform(rng_engine& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased uniform integer in [0, n) by rejection of the biased top range.
inline std::uint64_t bounded_uniform(rng_engine& rng, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("bounded_uniform: n must be positive");
    constexpr std::uint64_t top = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t cut = top - (top % n + 1) % n;  // accept x <= cut
    std::uint64_t x;
    do {
        x = rng();
    } while (x > cut);
    return x % n;
}

// Uniform k-subset of {0, ..., count-1}, returned sorted ascending. Duplicates
// from repeated uniform draws are rejected, which keeps the subset exactly
// uniform over all C(count, k) choices. k == count returns the full range
// without consuming randomness.
inline std::vector<std::uint32_t> sample_uniform_subset(std::uint64_t count, std::uint32_t k,
                                                        rng_engine& rng) {
    if (k > count) throw std::invalid_argument("sample_uniform_subset: k exceeds population");
    std::vector<std::uint32_t> out;
    out.reserve(k);
    if (k == count) {
        for (std::uint32_t v = 0; v < count; ++v) out.push_back(v);
        return out;
    }
    while (out.size() < k) {
        const auto v = static_cast<std::uint32_t>(bounded_uniform(rng, count));
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace ncg
