// Copyright 2026 The bellsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>

#include "bellsim/qstate.hpp"

namespace bellsim {

/// Coincidence counts of the four outcome combinations at one settings pair.
struct PairCounts {
    std::uint64_t n_pp = 0;
    std::uint64_t n_pm = 0;
    std::uint64_t n_mp = 0;
    std::uint64_t n_mm = 0;

    [[nodiscard]] std::uint64_t total() const noexcept {
        return n_pp + n_pm + n_mp + n_mm;
    }

    void add(Outcome d, Outcome g) noexcept {
        if (d == Outcome::Plus) {
            ++(g == Outcome::Plus ? n_pp : n_pm);
        } else {
            ++(g == Outcome::Plus ? n_mp : n_mm);
        }
    }

    /// (n_pp + n_mm - n_pm - n_mp) / total. Caller guarantees total() > 0.
    [[nodiscard]] double correlation() const noexcept {
        const auto same = static_cast<std::int64_t>(n_pp + n_mm);
        const auto diff = static_cast<std::int64_t>(n_pm + n_mp);
        return static_cast<double>(same - diff) /
               static_cast<double>(total());
    }

    /// Binomial standard error sqrt((1 - E^2) / total).
    [[nodiscard]] double std_error() const noexcept {
        const double e = correlation();
        return std::sqrt((1.0 - e * e) / static_cast<double>(total()));
    }

    [[nodiscard]] JointDistribution frequencies() const noexcept {
        const double n = static_cast<double>(total());
        return {static_cast<double>(n_pp) / n, static_cast<double>(n_pm) / n,
                static_cast<double>(n_mp) / n, static_cast<double>(n_mm) / n};
    }

    friend bool operator==(const PairCounts &, const PairCounts &) = default;
};

} // namespace bellsim
