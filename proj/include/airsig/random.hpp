#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace airsig {

using Rng = std::mt19937_64;

/// Deterministic child seed from a master seed and a path of stream indices
/// (e.g. master → user → specimen). Built on std::seed_seq, whose mixing is
/// fully specified by the standard.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::vector<std::uint32_t> words{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32)};
    for (auto p : path) {
        words.push_back(static_cast<std::uint32_t>(p));
        words.push_back(static_cast<std::uint32_t>(p >> 32));
    }
    std::seed_seq seq(words.begin(), words.end());
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

inline Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> path = {}) {
    return Rng(path.size() == 0 ? seed : derive_seed(seed, path));
}

}  // namespace airsig
