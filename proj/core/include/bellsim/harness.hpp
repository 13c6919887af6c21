// Copyright 2026 The bellsim Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file
 * Finite-statistics Bell experiments: trial generation from quantum or LHV
 * sources, coincidence tabulation, CHSH analysis with error bars, and
 * numerical search for maximal violations.
 */

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "bellsim/counts.hpp"
#include "bellsim/inequalities.hpp"
#include "bellsim/lhv.hpp"
#include "bellsim/qstate.hpp"

namespace bellsim {

/// Trials per RNG substream block.
inline constexpr std::uint64_t kTrialBlockSize = 1u << 14;

enum class SchedulePolicy { RoundRobin, UniformRandom };

struct AnglePair {
    double delta = 0.0;
    double gamma = 0.0;
};

/// Labels of the four CHSH settings pairs, in schedule order.
inline constexpr std::array<const char *, 4> kChshPairLabels = {
    "dg", "dg'", "d'g", "d'g'"};

struct SettingsSchedule {
    std::vector<AnglePair> pairs;
    SchedulePolicy policy = SchedulePolicy::UniformRandom;

    /// (delta,gamma), (delta,gamma'), (delta',gamma), (delta',gamma').
    static SettingsSchedule
    chsh(const ChshAngles &angles,
         SchedulePolicy policy = SchedulePolicy::UniformRandom);
};

struct TrialRecord {
    std::uint32_t pair_index = 0;
    Outcome outcome_d = Outcome::Plus;
    Outcome outcome_g = Outcome::Plus;

    friend bool operator==(const TrialRecord &,
                           const TrialRecord &) = default;
};

struct TrialLog {
    SettingsSchedule schedule;
    std::vector<TrialRecord> records;
    std::uint64_t seed = 0;
    std::string source_description;
};

/// A quantum state sampled by the Born rule or an LHV model sampled through
/// its hidden variable.
using TrialSource =
    std::variant<EntangledState, std::reference_wrapper<const LhvModel>>;

std::string describe(const TrialSource &source);

/**
 * Simulates n trials. Trial blocks of kTrialBlockSize draw from substreams
 * keyed by (seed, block), so the log is identical for any worker count.
 * Throws std::invalid_argument for n == 0 or an empty schedule.
 */
TrialLog run_trials(const TrialSource &source, const SettingsSchedule &schedule,
                    std::uint64_t n, std::uint64_t seed, unsigned workers = 1);

struct CountsTable {
    std::vector<AnglePair> pairs;
    std::vector<PairCounts> counts; ///< parallel to `pairs`

    [[nodiscard]] std::uint64_t total() const noexcept;
};

CountsTable tabulate(const TrialLog &log);

/// Positions of the (dg, dg', d'g, d'g') pairs inside a CountsTable.
struct ChshMapping {
    std::array<std::size_t, 4> index{0, 1, 2, 3};
};

struct PairEstimate {
    std::string pair;
    double correlation = 0.0;
    double std_error = 0.0;
    std::uint64_t n = 0;
};

struct ChshAnalysis {
    std::array<PairEstimate, 4> per_pair;
    double s_mean = 0.0;
    double s_std_error = 0.0;
    bool violated_2sigma = false;
    bool violated_5sigma = false;
};

/// Per-pair E and binomial errors combined into S. Throws
/// MissingSettingsPair naming the pair if a mapped pair has no trials.
ChshAnalysis analyze_chsh(const CountsTable &counts,
                          const ChshMapping &mapping = {});

struct ChshOptimum {
    ChshAngles angles;
    double s_star = 0.0; ///< |S| at `angles`
};

struct MaximizeOptions {
    /// Tie all four angles to a single value.
    bool equal_angles = false;
};

/**
 * Maximizes |S| of the closed-form correlation: a full grid over the four
 * angles at `coarse_step_deg`, then coordinate descent with step halving
 * down to 1e-8 rad, at most `refine_iters` sweeps.
 */
ChshOptimum maximize_chsh(StateKind kind, double coarse_step_deg = 15.0,
                          int refine_iters = 500,
                          const MaximizeOptions &options = {});

struct WignerScanRow {
    double theta2 = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
};

/// Wigner inequality for the spin singlet over an evenly spaced theta2 grid
/// from theta1 to theta3 inclusive. Throws std::invalid_argument if
/// steps < 3.
std::vector<WignerScanRow> wigner_scan(double theta1, double theta3,
                                       std::size_t steps);

} // namespace bellsim
