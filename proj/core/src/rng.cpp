// Copyright 2026 The bellsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "bellsim/rng.hpp"

namespace bellsim {

namespace {
__extension__ typedef unsigned __int128 uint128;
} // namespace

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

Rng Rng::substream(std::uint64_t seed, std::uint64_t stream,
                   std::uint64_t block) noexcept {
    const std::uint64_t key = mix64(mix64(mix64(seed) ^ stream) ^ block);
    return Rng{key};
}

std::uint64_t Rng::below(std::uint64_t n) {
    // Lemire-style rejection keeps the result unbiased.
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        const std::uint64_t x = engine_();
        const uint128 m = static_cast<uint128>(x) * static_cast<uint128>(n);
        if (static_cast<std::uint64_t>(m) >= threshold) {
            return static_cast<std::uint64_t>(m >> 64);
        }
    }
}

} // namespace bellsim
