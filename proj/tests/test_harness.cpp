// Copyright 2026 The bellsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "bellsim/harness.hpp"
#include "oracles.hpp"

using namespace bellsim;

namespace {

const double kPi = oracle::kPi;
const ChshAngles kCanonical{0.0, -kPi / 2, 3 * kPi / 4, -3 * kPi / 4};

constexpr std::array<StateKind, 4> kAllKinds = {
    StateKind::SpinAnticorrelated, StateKind::SpinCorrelated,
    StateKind::PhotonCorrelated, StateKind::PhotonAnticorrelated};

CountsTable one_each(Outcome d, Outcome g) {
    CountsTable t;
    t.pairs = SettingsSchedule::chsh(kCanonical).pairs;
    t.counts.assign(4, PairCounts{});
    for (auto &c : t.counts) {
        c.add(d, g);
    }
    return t;
}

} // namespace

TEST(Schedule, ChshPairOrder) {
    const auto s = SettingsSchedule::chsh({1, 2, 3, 4});
    ASSERT_EQ(s.pairs.size(), 4u);
    EXPECT_EQ(s.pairs[0].delta, 1);
    EXPECT_EQ(s.pairs[0].gamma, 3);
    EXPECT_EQ(s.pairs[1].delta, 1);
    EXPECT_EQ(s.pairs[1].gamma, 4);
    EXPECT_EQ(s.pairs[2].delta, 2);
    EXPECT_EQ(s.pairs[2].gamma, 3);
    EXPECT_EQ(s.pairs[3].delta, 2);
    EXPECT_EQ(s.pairs[3].gamma, 4);
}

TEST(RunTrials, RejectsZeroTrialsAndEmptySchedule) {
    const auto s = SettingsSchedule::chsh(kCanonical);
    EXPECT_THROW(run_trials(make_state(StateKind::SpinAnticorrelated), s, 0, 1),
                 std::invalid_argument);
    EXPECT_THROW(run_trials(make_state(StateKind::SpinAnticorrelated),
                            SettingsSchedule{}, 10, 1),
                 std::invalid_argument);
}

TEST(RunTrials, RoundRobinCyclesPairs) {
    const auto log =
        run_trials(make_state(StateKind::SpinCorrelated),
                   SettingsSchedule::chsh(kCanonical, SchedulePolicy::RoundRobin),
                   103, 5);
    ASSERT_EQ(log.records.size(), 103u);
    for (std::size_t i = 0; i < log.records.size(); ++i) {
        ASSERT_EQ(log.records[i].pair_index, i % 4);
    }
    EXPECT_EQ(log.seed, 5u);
    EXPECT_EQ(log.source_description, "quantum spin-correlated");
}

TEST(RunTrials, DeterministicAcrossWorkerCounts) {
    const auto s = SettingsSchedule::chsh(kCanonical);
    const TrialSource quantum = make_state(StateKind::SpinAnticorrelated);
    const TrialSource lhv = std::cref(find_builtin_model("quantum_mimic_attempt"));
    for (const TrialSource *src : {&quantum, &lhv}) {
        const auto a = run_trials(*src, s, 100000, 42, 1);
        const auto b = run_trials(*src, s, 100000, 42, 4);
        const auto c = run_trials(*src, s, 100000, 42, 1);
        EXPECT_EQ(a.records, b.records);
        EXPECT_EQ(a.records, c.records);
        const auto d = run_trials(*src, s, 100000, 43, 1);
        EXPECT_NE(a.records, d.records);
    }
}

// A prefix of a longer run is the shorter run: blocks are keyed by index.
TEST(RunTrials, PrefixStable) {
    const auto s = SettingsSchedule::chsh(kCanonical);
    const auto shorter =
        run_trials(make_state(StateKind::PhotonCorrelated), s, 20000, 8);
    const auto longer =
        run_trials(make_state(StateKind::PhotonCorrelated), s, 50000, 8, 2);
    EXPECT_TRUE(std::equal(shorter.records.begin(), shorter.records.end(),
                           longer.records.begin()));
}

TEST(HarnessProperty, EqualAnglesGiveStrictCorrelation) {
    std::mt19937_64 gen(81);
    std::uniform_real_distribution<double> angle(-7.0, 7.0);
    for (StateKind k : kAllKinds) {
        for (int t = 0; t < 5; ++t) {
            const double a = angle(gen);
            const SettingsSchedule s{{{a, a}}, SchedulePolicy::UniformRandom};
            const auto log = run_trials(make_state(k), s, 10000, 90 + t);
            for (const auto &r : log.records) {
                const bool same = r.outcome_d == r.outcome_g;
                ASSERT_EQ(same, !is_anticorrelated(k)) << to_string(k);
            }
        }
    }
    for (const LhvModel &m : builtin_models()) {
        const SettingsSchedule s{{{0.7, 0.7}}, SchedulePolicy::UniformRandom};
        const auto log = run_trials(std::cref(m), s, 10000, 99);
        for (const auto &r : log.records) {
            ASSERT_NE(r.outcome_d, r.outcome_g) << m.name();
        }
    }
}

// Cell frequencies against Born probabilities from the projector oracle.
TEST(HarnessProperty, FrequenciesFollowBornRule) {
    const auto s = SettingsSchedule::chsh({0.1, 1.3, 2.2, -0.6});
    const oracle::Born born = oracle::photon_correlated();
    const auto table = tabulate(
        run_trials(make_state(StateKind::PhotonCorrelated), s, 400000, 17));
    for (std::size_t k = 0; k < 4; ++k) {
        const PairCounts &c = table.counts[k];
        const double n = static_cast<double>(c.total());
        const auto f = c.frequencies();
        const double d = s.pairs[k].delta, g = s.pairs[k].gamma;
        const std::array<double, 4> p{born.probability(d, 1, g, 1),
                                      born.probability(d, 1, g, -1),
                                      born.probability(d, -1, g, 1),
                                      born.probability(d, -1, g, -1)};
        const std::array<double, 4> got{f.pp, f.pm, f.mp, f.mm};
        for (std::size_t cell = 0; cell < 4; ++cell) {
            const double sigma = std::sqrt(p[cell] * (1 - p[cell]) / n);
            EXPECT_NEAR(got[cell], p[cell], 5 * sigma + 1e-12)
                << "pair " << k << " cell " << cell;
        }
    }
}

TEST(Tabulate, CountsAndRejectsBadIndex) {
    TrialLog log;
    log.schedule = SettingsSchedule::chsh(kCanonical);
    log.records = {{0, Outcome::Plus, Outcome::Minus},
                   {0, Outcome::Plus, Outcome::Minus},
                   {3, Outcome::Minus, Outcome::Minus}};
    const auto t = tabulate(log);
    EXPECT_EQ(t.total(), 3u);
    EXPECT_EQ(t.counts[0].n_pm, 2u);
    EXPECT_EQ(t.counts[3].n_mm, 1u);
    log.records.push_back({4, Outcome::Plus, Outcome::Plus});
    EXPECT_THROW(tabulate(log), std::out_of_range);
}

TEST(AnalyzeChsh, OneTrialPerPairAllPlus) {
    const auto a = analyze_chsh(one_each(Outcome::Plus, Outcome::Plus));
    EXPECT_EQ(a.s_mean, 2.0);
    EXPECT_EQ(a.s_std_error, 0.0);
    EXPECT_FALSE(a.violated_2sigma);
    EXPECT_EQ(a.per_pair[1].pair, "dg'");
}

TEST(AnalyzeChsh, MissingPairIsNamed) {
    auto t = one_each(Outcome::Plus, Outcome::Plus);
    t.counts[2] = PairCounts{};
    try {
        analyze_chsh(t);
        FAIL() << "expected MissingSettingsPair";
    } catch (const MissingSettingsPair &e) {
        EXPECT_STREQ(e.what(), "settings pair d'g has no trials");
    }
}

TEST(AnalyzeChsh, ErrorsCombineInQuadrature) {
    CountsTable t;
    t.pairs = SettingsSchedule::chsh(kCanonical).pairs;
    t.counts = {{30, 10, 10, 50}, {40, 10, 20, 30}, {25, 25, 25, 25},
                {10, 40, 45, 5}};
    const auto a = analyze_chsh(t);
    // E = (same - diff) / n for each pair, written out.
    const std::array<double, 4> e{0.6, 0.4, 0.0, -0.7};
    EXPECT_NEAR(a.s_mean, e[0] + e[1] + e[2] - e[3], 1e-15);
    double var = 0.0;
    for (double x : e) {
        var += (1 - x * x) / 100;
    }
    EXPECT_NEAR(a.s_std_error, std::sqrt(var), 1e-15);
    // |S| - 2 = -0.3: nothing to flag.
    EXPECT_FALSE(a.violated_2sigma);
}

TEST(AnalyzeChsh, CustomMappingReordersPairs) {
    CountsTable t;
    t.pairs = SettingsSchedule::chsh(kCanonical).pairs;
    t.counts = {{1, 0, 0, 0}, {0, 1, 0, 0}, {1, 0, 0, 0}, {1, 0, 0, 0}};
    // Swap the roles of dg' and d'g'.
    ChshMapping m;
    m.index = {0, 3, 2, 1};
    EXPECT_EQ(analyze_chsh(t, m).s_mean, 1.0 + 1.0 + 1.0 + 1.0);
    EXPECT_EQ(analyze_chsh(t).s_mean, 1.0 - 1.0 + 1.0 - 1.0);
}

TEST(Maximize, ReachesTsirelsonForEveryState) {
    for (StateKind k : kAllKinds) {
        const auto opt = maximize_chsh(k);
        EXPECT_NEAR(opt.s_star, 2 * std::sqrt(2.0), 1e-6) << to_string(k);
        const QuantumClosedFormSource q{k};
        EXPECT_NEAR(std::abs(chsh_s(q, opt.angles)), opt.s_star, 1e-12);
    }
}

TEST(Maximize, AgreesWithIndependentGridSearch) {
    // These grids contain the optimum: multiples of 45 and 22.5 degrees.
    const double spin = oracle::grid_max_chsh(-1.0, 1.0, 5.0);
    const double photon = oracle::grid_max_chsh(1.0, 2.0, 2.5);
    EXPECT_NEAR(spin, 2 * std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(photon, 2 * std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(maximize_chsh(StateKind::SpinAnticorrelated, 5.0).s_star, spin,
                1e-9);
}

TEST(Maximize, EqualAnglesCannotViolate) {
    const auto opt = maximize_chsh(StateKind::SpinAnticorrelated, 15.0, 500,
                                   {.equal_angles = true});
    EXPECT_NEAR(opt.s_star, 2.0, 1e-12);
    EXPECT_EQ(opt.angles.delta, opt.angles.gamma_prime);
}

TEST(Maximize, ValidatesArguments) {
    EXPECT_THROW(maximize_chsh(StateKind::SpinCorrelated, 0.0),
                 std::invalid_argument);
    EXPECT_THROW(maximize_chsh(StateKind::SpinCorrelated, 20.0),
                 std::invalid_argument);
    EXPECT_THROW(maximize_chsh(StateKind::SpinCorrelated, 15.0, -1),
                 std::invalid_argument);
}

TEST(WignerScan, MatchesHalfAngleFormula) {
    const auto rows = wigner_scan(0.0, kPi / 2, 19);
    ASSERT_EQ(rows.size(), 19u);
    std::size_t argmax = 0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto e = oracle::singlet_wigner(0.0, rows[k].theta2, kPi / 2);
        EXPECT_NEAR(rows[k].lhs, e.lhs, 1e-12);
        EXPECT_NEAR(rows[k].rhs, e.rhs, 1e-12);
        EXPECT_NEAR(rows[k].margin, e.lhs - e.rhs, 1e-12);
        if (k > 0 && k + 1 < rows.size()) {
            EXPECT_GT(rows[k].margin, 0.0) << k;
        }
        if (rows[k].margin > rows[argmax].margin) {
            argmax = k;
        }
    }
    EXPECT_NEAR(rows[argmax].theta2, kPi / 4, 1e-12);
    EXPECT_NEAR(rows.front().margin, 0.0, 1e-12);
    EXPECT_NEAR(rows.back().margin, 0.0, 1e-12);
    EXPECT_THROW(wigner_scan(0.0, 1.0, 2), std::invalid_argument);
}
