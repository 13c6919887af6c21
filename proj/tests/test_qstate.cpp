// Copyright 2026 The bellsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "bellsim/qstate.hpp"
#include "oracles.hpp"

using namespace bellsim;

namespace {

constexpr std::array<StateKind, 4> kAllKinds = {
    StateKind::SpinAnticorrelated, StateKind::SpinCorrelated,
    StateKind::PhotonCorrelated, StateKind::PhotonAnticorrelated};

oracle::Born oracle_for(StateKind kind) {
    switch (kind) {
    case StateKind::SpinAnticorrelated:
        return oracle::singlet();
    case StateKind::SpinCorrelated:
        return oracle::spin_correlated();
    case StateKind::PhotonCorrelated:
        return oracle::photon_correlated();
    case StateKind::PhotonAnticorrelated:
        return oracle::photon_anticorrelated();
    }
    return oracle::singlet();
}

} // namespace

TEST(Outcome, IntConversions) {
    EXPECT_EQ(to_int(Outcome::Plus), 1);
    EXPECT_EQ(to_int(Outcome::Minus), -1);
    EXPECT_EQ(outcome_from_int(1), Outcome::Plus);
    EXPECT_EQ(outcome_from_int(-1), Outcome::Minus);
    EXPECT_THROW(outcome_from_int(0), std::invalid_argument);
    EXPECT_EQ(flip(Outcome::Plus), Outcome::Minus);
}

TEST(EntangledState, RejectsUnnormalizedAmplitudes) {
    EXPECT_THROW(EntangledState(StateKind::SpinCorrelated, ParticleKind::SpinHalf,
                                {1.0, 0.0, 0.0, 1.0}),
                 std::invalid_argument);
    EXPECT_NO_THROW(EntangledState(StateKind::SpinCorrelated,
                                   ParticleKind::SpinHalf,
                                   {1.0, 0.0, 0.0, 0.0}));
}

TEST(EntangledState, BuiltinsAreNormalizedWithMatchingParticle) {
    for (StateKind k : kAllKinds) {
        const EntangledState s = make_state(k);
        double norm = 0.0;
        for (const auto &a : s.amplitudes()) {
            norm += std::norm(a);
        }
        EXPECT_NEAR(norm, 1.0, 1e-15);
        EXPECT_EQ(s.kind(), k);
        EXPECT_EQ(s.particle(), particle_of(k));
    }
}

TEST(AnalyzerBasis, RejectsNonFiniteAngles) {
    EXPECT_THROW(analyzer_basis(ParticleKind::SpinHalf, std::nan("")),
                 std::invalid_argument);
    EXPECT_THROW(analyzer_basis(ParticleKind::Photon, INFINITY),
                 std::invalid_argument);
}

TEST(JointDistribution, SingletAtRightAngleIsUniform) {
    const auto j = joint_distribution(make_state(StateKind::SpinAnticorrelated),
                                      0.0, oracle::kPi / 2);
    EXPECT_NEAR(j.pp, 0.25, 1e-12);
    EXPECT_NEAR(j.pm, 0.25, 1e-12);
    EXPECT_NEAR(j.mp, 0.25, 1e-12);
    EXPECT_NEAR(j.mm, 0.25, 1e-12);
}

TEST(JointDistribution, SingletAtZeroIsPerfectlyAnticorrelated) {
    const auto j =
        joint_distribution(make_state(StateKind::SpinAnticorrelated), 0.0, 0.0);
    EXPECT_NEAR(j.pp, 0.0, 1e-15);
    EXPECT_NEAR(j.mm, 0.0, 1e-15);
    EXPECT_NEAR(j.pm, 0.5, 1e-15);
    EXPECT_NEAR(j.mp, 0.5, 1e-15);
}

TEST(JointDistribution, PhotonCorrelatedAtFortyFiveDegrees) {
    const auto j = joint_distribution(make_state(StateKind::PhotonCorrelated),
                                      0.0, oracle::deg(45));
    EXPECT_NEAR(j.correlation(), 0.0, 1e-12);
    const auto k = joint_distribution(make_state(StateKind::PhotonCorrelated),
                                      oracle::deg(10), oracle::deg(100));
    EXPECT_NEAR(k.correlation(), -1.0, 1e-12);
}

TEST(ClosedForm, SpotValues) {
    EXPECT_NEAR(closed_form_correlation(StateKind::SpinAnticorrelated, 0.0,
                                        oracle::kPi / 3),
                -0.5, 1e-15);
    EXPECT_NEAR(closed_form_correlation(StateKind::SpinCorrelated, 0.0,
                                        oracle::kPi / 3),
                0.5, 1e-15);
    EXPECT_NEAR(closed_form_correlation(StateKind::PhotonCorrelated, 0.0,
                                        oracle::kPi / 6),
                0.5, 1e-15);
    EXPECT_NEAR(closed_form_correlation(StateKind::PhotonAnticorrelated, 0.0,
                                        oracle::kPi / 6),
                -0.5, 1e-15);
}

// Born-rule probabilities against the 4x4 projector computation.
TEST(QstateProperty, JointMatchesProjectorOracle) {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> angle(-4 * oracle::kPi,
                                                 4 * oracle::kPi);
    for (StateKind k : kAllKinds) {
        const EntangledState s = make_state(k);
        const oracle::Born born = oracle_for(k);
        for (int t = 0; t < 2500; ++t) {
            const double d = angle(gen);
            const double g = angle(gen);
            const auto j = joint_distribution(s, d, g);
            ASSERT_NEAR(j.pp, born.probability(d, +1, g, +1), 1e-12);
            ASSERT_NEAR(j.pm, born.probability(d, +1, g, -1), 1e-12);
            ASSERT_NEAR(j.mp, born.probability(d, -1, g, +1), 1e-12);
            ASSERT_NEAR(j.mm, born.probability(d, -1, g, -1), 1e-12);
        }
    }
}

TEST(QstateProperty, DistributionAndMarginals) {
    std::mt19937_64 gen(12);
    std::uniform_real_distribution<double> angle(-10.0, 10.0);
    for (StateKind k : kAllKinds) {
        const EntangledState s = make_state(k);
        for (int t = 0; t < 2500; ++t) {
            const auto j = joint_distribution(s, angle(gen), angle(gen));
            for (double p : {j.pp, j.pm, j.mp, j.mm}) {
                ASSERT_GE(p, -1e-15);
                ASSERT_LE(p, 1.0 + 1e-15);
            }
            ASSERT_NEAR(j.pp + j.pm + j.mp + j.mm, 1.0, 1e-12);
            // Maximally entangled: each side alone is a fair coin.
            ASSERT_NEAR(j.marginal_d(Outcome::Plus), 0.5, 1e-12);
            ASSERT_NEAR(j.marginal_g(Outcome::Minus), 0.5, 1e-12);
        }
    }
}

TEST(QstateProperty, BornAgreesWithClosedForm) {
    std::mt19937_64 gen(13);
    std::uniform_real_distribution<double> angle(-10.0, 10.0);
    for (StateKind k : kAllKinds) {
        const EntangledState s = make_state(k);
        for (int t = 0; t < 2500; ++t) {
            const double d = angle(gen);
            const double g = angle(gen);
            ASSERT_NEAR(correlation(s, d, g), closed_form_correlation(k, d, g),
                        1e-12);
        }
    }
}

TEST(QstateProperty, EqualAnglesArePerfectlyCorrelatedOrAnticorrelated) {
    std::mt19937_64 gen(14);
    std::uniform_real_distribution<double> angle(-10.0, 10.0);
    for (StateKind k : kAllKinds) {
        const EntangledState s = make_state(k);
        const double expected = is_anticorrelated(k) ? -1.0 : 1.0;
        for (int t = 0; t < 2500; ++t) {
            const double a = angle(gen);
            ASSERT_NEAR(correlation(s, a, a), expected, 1e-12);
        }
    }
}

// Flipping one analyzer by half a turn of its period flips its outcome.
TEST(QstateProperty, OppositeAnalyzerNegatesCorrelation) {
    std::mt19937_64 gen(15);
    std::uniform_real_distribution<double> angle(-10.0, 10.0);
    for (StateKind k : kAllKinds) {
        const EntangledState s = make_state(k);
        const double half_turn = particle_of(k) == ParticleKind::SpinHalf
                                     ? oracle::kPi
                                     : oracle::kPi / 2;
        for (int t = 0; t < 1000; ++t) {
            const double d = angle(gen);
            const double g = angle(gen);
            ASSERT_NEAR(correlation(s, d, g + half_turn), -correlation(s, d, g),
                        1e-12);
        }
    }
}
