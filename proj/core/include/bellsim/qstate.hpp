// Copyright 2026 The bellsim Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file
 * Entangled two-particle states of two-level systems and their Born-rule
 * joint outcome distributions for analyzers rotated in a common plane.
 */

#pragma once

#include <array>
#include <complex>
#include <stdexcept>

namespace bellsim {

/// Absolute tolerance used for all exact-math checks on states.
inline constexpr double kExactTolerance = 1e-12;

enum class ParticleKind { SpinHalf, Photon };

enum class StateKind {
    SpinAnticorrelated,
    SpinCorrelated,
    PhotonCorrelated,
    PhotonAnticorrelated,
};

/// Result of a single two-valued measurement. Up and V map to Plus.
enum class Outcome : int { Plus = 1, Minus = -1 };

constexpr int to_int(Outcome o) noexcept { return static_cast<int>(o); }

constexpr Outcome flip(Outcome o) noexcept {
    return o == Outcome::Plus ? Outcome::Minus : Outcome::Plus;
}

/// Throws std::invalid_argument unless value is +1 or -1.
Outcome outcome_from_int(int value);

ParticleKind particle_of(StateKind kind) noexcept;
bool is_anticorrelated(StateKind kind) noexcept;
const char *to_string(StateKind kind) noexcept;

/// Amplitudes over (up,up), (up,down), (down,up), (down,down). For photons
/// read V for up and H for down.
using Amplitudes = std::array<std::complex<double>, 4>;

class EntangledState {
  public:
    /// Throws std::invalid_argument if the amplitudes are not normalized
    /// within kExactTolerance.
    EntangledState(StateKind kind, ParticleKind particle,
                   const Amplitudes &amplitudes);

    [[nodiscard]] StateKind kind() const noexcept { return kind_; }
    [[nodiscard]] ParticleKind particle() const noexcept { return particle_; }
    [[nodiscard]] const Amplitudes &amplitudes() const noexcept {
        return amplitudes_;
    }

  private:
    StateKind kind_;
    ParticleKind particle_;
    Amplitudes amplitudes_;
};

/// The anticorrelated states carry relative phase -1 so that their
/// correlation depends on the angle difference only.
EntangledState make_state(StateKind kind);

/// Real orthonormal measurement basis; columns (plus, minus) form a rotation.
struct AnalyzerBasis {
    std::array<double, 2> plus;
    std::array<double, 2> minus;
};

/// Spin-1/2 analyzers rotate the basis by angle/2, polarizers by angle.
AnalyzerBasis analyzer_basis(ParticleKind particle, double angle);

struct JointDistribution {
    double pp = 0.0;
    double pm = 0.0;
    double mp = 0.0;
    double mm = 0.0;

    [[nodiscard]] double probability(Outcome d, Outcome g) const noexcept;
    /// P(++) + P(--) - P(+-) - P(-+)
    [[nodiscard]] double correlation() const noexcept {
        return pp + mm - pm - mp;
    }
    [[nodiscard]] double marginal_d(Outcome d) const noexcept;
    [[nodiscard]] double marginal_g(Outcome g) const noexcept;
};

/// Born rule with particle D's analyzer at delta and G's at gamma (radians).
JointDistribution joint_distribution(const EntangledState &state, double delta,
                                     double gamma);

double correlation(const EntangledState &state, double delta, double gamma);

/// -cos(gamma - delta) / +cos(gamma - delta) for anticorrelated / correlated
/// spins; -cos(2(gamma - delta)) / +cos(2(gamma - delta)) for photons.
double closed_form_correlation(StateKind kind, double delta, double gamma);

} // namespace bellsim
