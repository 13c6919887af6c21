// Copyright 2026 The bellsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

namespace bellsim {

/// SplitMix64 finalizer; used to derive substream keys.
std::uint64_t mix64(std::uint64_t x) noexcept;

/**
 * Random stream for simulations.
 *
 * Substreams are keyed by (seed, stream, block) so a block of trials draws
 * the same numbers no matter which worker thread runs it. The engine is
 * std::mt19937_64, whose output sequence is fixed by the standard, and
 * doubles are formed from the top 53 bits, so sequences are identical
 * across standard library implementations.
 */
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_{seed} {}

    static Rng substream(std::uint64_t seed, std::uint64_t stream,
                         std::uint64_t block) noexcept;

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform on [0, n); n must be nonzero.
    std::uint64_t below(std::uint64_t n);

  private:
    std::mt19937_64 engine_;
};

} // namespace bellsim
