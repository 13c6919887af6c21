// Copyright 2026 The bellsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "bellsim/qstate.hpp"

#include <cmath>
#include <string>

namespace bellsim {

namespace {

constexpr double kHalfRoot = 0.70710678118654752440; // sqrt(1/2)

const std::array<double, 2> &vector_for(const AnalyzerBasis &basis,
                                        Outcome o) noexcept {
    return o == Outcome::Plus ? basis.plus : basis.minus;
}

} // namespace

Outcome outcome_from_int(int value) {
    if (value == 1) {
        return Outcome::Plus;
    }
    if (value == -1) {
        return Outcome::Minus;
    }
    throw std::invalid_argument("outcome must be +1 or -1, got " +
                                std::to_string(value));
}

ParticleKind particle_of(StateKind kind) noexcept {
    switch (kind) {
    case StateKind::SpinAnticorrelated:
    case StateKind::SpinCorrelated:
        return ParticleKind::SpinHalf;
    case StateKind::PhotonCorrelated:
    case StateKind::PhotonAnticorrelated:
        return ParticleKind::Photon;
    }
    return ParticleKind::SpinHalf;
}

bool is_anticorrelated(StateKind kind) noexcept {
    return kind == StateKind::SpinAnticorrelated ||
           kind == StateKind::PhotonAnticorrelated;
}

const char *to_string(StateKind kind) noexcept {
    switch (kind) {
    case StateKind::SpinAnticorrelated:
        return "spin-anticorrelated";
    case StateKind::SpinCorrelated:
        return "spin-correlated";
    case StateKind::PhotonCorrelated:
        return "photon-correlated";
    case StateKind::PhotonAnticorrelated:
        return "photon-anticorrelated";
    }
    return "unknown";
}

EntangledState::EntangledState(StateKind kind, ParticleKind particle,
                               const Amplitudes &amplitudes)
    : kind_{kind}, particle_{particle}, amplitudes_{amplitudes} {
    double norm = 0.0;
    for (const auto &a : amplitudes_) {
        norm += std::norm(a);
    }
    if (!(std::abs(norm - 1.0) <= kExactTolerance)) {
        throw std::invalid_argument("state amplitudes are not normalized");
    }
}

EntangledState make_state(StateKind kind) {
    const std::complex<double> h{kHalfRoot, 0.0};
    const std::complex<double> zero{};
    const ParticleKind particle = particle_of(kind);
    if (is_anticorrelated(kind)) {
        return EntangledState{kind, particle, {zero, h, -h, zero}};
    }
    return EntangledState{kind, particle, {h, zero, zero, h}};
}

AnalyzerBasis analyzer_basis(ParticleKind particle, double angle) {
    if (!std::isfinite(angle)) {
        throw std::invalid_argument("analyzer angle must be finite");
    }
    const double phi = particle == ParticleKind::SpinHalf ? angle / 2 : angle;
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    return AnalyzerBasis{{c, s}, {-s, c}};
}

double JointDistribution::probability(Outcome d, Outcome g) const noexcept {
    if (d == Outcome::Plus) {
        return g == Outcome::Plus ? pp : pm;
    }
    return g == Outcome::Plus ? mp : mm;
}

double JointDistribution::marginal_d(Outcome d) const noexcept {
    return probability(d, Outcome::Plus) + probability(d, Outcome::Minus);
}

double JointDistribution::marginal_g(Outcome g) const noexcept {
    return probability(Outcome::Plus, g) + probability(Outcome::Minus, g);
}

JointDistribution joint_distribution(const EntangledState &state, double delta,
                                     double gamma) {
    const AnalyzerBasis bd = analyzer_basis(state.particle(), delta);
    const AnalyzerBasis bg = analyzer_basis(state.particle(), gamma);
    const auto &amp = state.amplitudes();

    auto project = [&](Outcome d, Outcome g) {
        const auto &u = vector_for(bd, d);
        const auto &v = vector_for(bg, g);
        std::complex<double> overlap{};
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t j = 0; j < 2; ++j) {
                overlap += u[i] * v[j] * amp[2 * i + j];
            }
        }
        return std::norm(overlap);
    };

    JointDistribution out;
    out.pp = project(Outcome::Plus, Outcome::Plus);
    out.pm = project(Outcome::Plus, Outcome::Minus);
    out.mp = project(Outcome::Minus, Outcome::Plus);
    out.mm = project(Outcome::Minus, Outcome::Minus);
    return out;
}

double correlation(const EntangledState &state, double delta, double gamma) {
    return joint_distribution(state, delta, gamma).correlation();
}

double closed_form_correlation(StateKind kind, double delta, double gamma) {
    const double sign = is_anticorrelated(kind) ? -1.0 : 1.0;
    const double diff = gamma - delta;
    if (particle_of(kind) == ParticleKind::SpinHalf) {
        return sign * std::cos(diff);
    }
    return sign * std::cos(2.0 * diff);
}

} // namespace bellsim
