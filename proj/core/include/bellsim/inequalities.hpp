// Copyright 2026 The bellsim Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file
 * Bell-type inequalities evaluated against any correlation source, and the
 * exhaustive quartet/sextet enumerations that bound them.
 *
 * Angles are radians. Particle D's analyzer angle is always the first
 * argument of a correlation, particle G's the second.
 */

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bellsim/counts.hpp"
#include "bellsim/lhv.hpp"
#include "bellsim/qstate.hpp"

namespace bellsim {

/// Margin above which an exactly evaluated inequality counts as violated.
inline constexpr double kViolationTolerance = 1e-9;
/// Statistical sources must exceed the bound by this many standard errors.
inline constexpr double kViolationSigmas = 5.0;

/// Selects the bracketed (anticorrelated) or plain (correlated) sign of the
/// (-)+ / (+)- notation.
enum class CorrelationSign { Anticorrelated, Correlated };

/// The "(-)+" sign as an outcome: Minus for anticorrelated systems.
constexpr Outcome minus_or_plus(CorrelationSign s) noexcept {
    return s == CorrelationSign::Anticorrelated ? Outcome::Minus
                                                : Outcome::Plus;
}
/// The "(+)-" sign as an outcome: Plus for anticorrelated systems.
constexpr Outcome plus_or_minus(CorrelationSign s) noexcept {
    return flip(minus_or_plus(s));
}

CorrelationSign correlation_sign(StateKind kind) noexcept;

/// A requested settings pair is absent from a tabulated source.
class MissingSettingsPair : public std::out_of_range {
  public:
    using std::out_of_range::out_of_range;
};

/// The source cannot provide joint outcome probabilities.
class JointUnavailable : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

class CorrelationSource {
  public:
    virtual ~CorrelationSource() = default;

    [[nodiscard]] virtual double correlation(double delta,
                                             double gamma) const = 0;

    [[nodiscard]] virtual std::optional<JointDistribution>
    joint(double /*delta*/, double /*gamma*/) const {
        return std::nullopt;
    }

    /// Number of samples behind the estimate at this pair; 0 means exact.
    [[nodiscard]] virtual std::uint64_t sample_count(double /*delta*/,
                                                     double /*gamma*/) const {
        return 0;
    }

    [[nodiscard]] virtual std::string describe() const = 0;

    /// Binomial standard error of correlation(); 0 for exact sources.
    [[nodiscard]] double std_error(double delta, double gamma) const;
};

/// Analytic correlation formulas. Joint probabilities follow from the
/// uniform single-particle marginals: P(++) = P(--) = (1 + E)/4.
class QuantumClosedFormSource final : public CorrelationSource {
  public:
    explicit QuantumClosedFormSource(StateKind kind) : kind_{kind} {}
    double correlation(double delta, double gamma) const override;
    std::optional<JointDistribution> joint(double delta,
                                           double gamma) const override;
    std::string describe() const override;

  private:
    StateKind kind_;
};

/// Born-rule evaluation of an explicit state vector.
class QuantumBornSource final : public CorrelationSource {
  public:
    explicit QuantumBornSource(EntangledState state)
        : state_{std::move(state)} {}
    double correlation(double delta, double gamma) const override;
    std::optional<JointDistribution> joint(double delta,
                                           double gamma) const override;
    std::string describe() const override;

  private:
    EntangledState state_;
};

class LhvSource final : public CorrelationSource {
  public:
    enum class Method { Quadrature, MonteCarlo };

    /// For Quadrature `n` is the node count, for MonteCarlo the sample
    /// count per settings pair. The model must outlive the source.
    LhvSource(const LhvModel &model, Method method, std::uint64_t n,
              std::uint64_t seed = 0);
    double correlation(double delta, double gamma) const override;
    std::uint64_t sample_count(double delta, double gamma) const override;
    std::string describe() const override;

  private:
    const LhvModel *model_;
    Method method_;
    std::uint64_t n_;
    std::uint64_t seed_;
};

/// Correlations estimated from coincidence counts. Pairs are matched
/// exactly (within 1e-12 rad); nothing is interpolated.
class EmpiricalSource final : public CorrelationSource {
  public:
    struct Entry {
        double delta = 0.0;
        double gamma = 0.0;
        PairCounts counts;
    };

    /// Throws std::invalid_argument if an entry has no trials.
    explicit EmpiricalSource(std::vector<Entry> entries,
                             std::string description = "empirical counts");
    double correlation(double delta, double gamma) const override;
    std::optional<JointDistribution> joint(double delta,
                                           double gamma) const override;
    std::uint64_t sample_count(double delta, double gamma) const override;
    std::string describe() const override;

  private:
    const Entry &find(double delta, double gamma) const;

    std::vector<Entry> entries_;
    std::string description_;
};

/// Mixture of the 8 constraint-consistent sextets over three angles shared
/// by both particles. Defined only at pairs drawn from those angles.
class SextetMixtureSource final : public CorrelationSource {
  public:
    SextetMixtureSource(std::span<const double> weights, CorrelationSign sign,
                        std::array<double, 3> angles);
    double correlation(double delta, double gamma) const override;
    std::optional<JointDistribution> joint(double delta,
                                           double gamma) const override;
    std::string describe() const override;

  private:
    std::size_t angle_index(double angle) const;

    std::array<double, 8> weights_{};
    CorrelationSign sign_;
    std::array<double, 3> angles_;
};

struct InequalityReport {
    std::string name;
    double lhs = 0.0;
    double bound = 0.0;
    double margin = 0.0; ///< lhs - bound
    double std_error = 0.0;
    double tolerance = kViolationTolerance;
    bool violated = false; ///< margin > tolerance
    std::vector<std::pair<std::string, double>> angles;
    std::string source;
};

/// Four CHSH analyzer settings: D at delta or delta', G at gamma or gamma'.
struct ChshAngles {
    double delta = 0.0;
    double delta_prime = 0.0;
    double gamma = 0.0;
    double gamma_prime = 0.0;
};

/// |E(d,g) - E(d,g')| (-)+ E(g,g') <= 1
InequalityReport bell_d1(const CorrelationSource &source, double delta,
                         double gamma, double gamma_prime,
                         CorrelationSign sign);

/// <S> = E(d,g) + E(d,g') + E(d',g) - E(d',g')
double chsh_s(const CorrelationSource &source, const ChshAngles &angles);

/// |<S>| <= 2
InequalityReport chsh_d4(const CorrelationSource &source,
                         const ChshAngles &angles);

/// |E(d,g) - E(d,g')| + E(d',g') + E(d',g) <= 2, for either sign.
InequalityReport chsh_d3(const CorrelationSource &source,
                         const ChshAngles &angles);

/**
 * Wigner's three-angle inequality on measured joint probabilities:
 *
 *   P(d@t3 = -, g@t2 = +) <= P(d@t1 = +, g@t2 = +) + P(d@t1 = -, g@t3 = s)
 *
 * with s = + for anticorrelated and - for correlated systems. `bound` holds
 * the right-hand side. Throws JointUnavailable if the source has no joint
 * probabilities.
 */
InequalityReport wigner_check(const CorrelationSource &source, double theta1,
                              double theta2, double theta3,
                              CorrelationSign sign =
                                  CorrelationSign::Anticorrelated);

struct Quartet {
    Outcome d_delta;
    Outcome g_gamma;
    Outcome d_delta_prime;
    Outcome g_gamma_prime;
    int s_value;
};

/// Integer S of one quartet.
int quartet_s(Outcome d, Outcome g, Outcome d_prime, Outcome g_prime) noexcept;

/// All 16 quartets; d_delta varies slowest, g_gamma_prime fastest, +1 first.
std::array<Quartet, 16> enumerate_quartets();

/// Weighted mean of S over quartets. Throws std::invalid_argument unless
/// weights are 16 nonnegative numbers summing to 1 within 1e-9.
double quartet_mixture_s(std::span<const double> weights);

struct Sextet {
    std::array<Outcome, 3> d;
    std::array<Outcome, 3> g;
    CorrelationSign sign;
};

/// The 8 sextets with g_j = (-)+ d_j, ordered by (d1, d2, d3), +1 first.
std::array<Sextet, 8> enumerate_sextets(CorrelationSign sign);

/// Sextet pattern; slots d1 d2 d3 g1 g2 g3, nullopt is a wildcard.
using SextetPattern = std::array<std::optional<Outcome>, 6>;

bool matches(const Sextet &sextet, const SextetPattern &pattern) noexcept;

/// Total weight of the sextets matching `pattern`.
double pattern_probability(std::span<const double> weights,
                           CorrelationSign sign, const SextetPattern &pattern);

struct WignerPatterns {
    SextetPattern lhs;        ///< < ?, (-)+, [-] ; ?, [+], (+)- >
    SextetPattern rhs_first;  ///< < [+], (-)+, ? ; (-)+, [+], ? >
    SextetPattern rhs_second; ///< < [-], ?, - ; (+)-, ?, [(+)-] >
};

WignerPatterns wigner_patterns(CorrelationSign sign) noexcept;

struct WignerProbabilities {
    double lhs = 0.0;
    double rhs_first = 0.0;
    double rhs_second = 0.0;
};

/// Pattern sums over a sextet mixture. Throws std::invalid_argument for an
/// invalid distribution.
WignerProbabilities sextet_mixture_probabilities(std::span<const double> weights,
                                                 CorrelationSign sign);

/// Throws std::invalid_argument unless `weights` has `expected` nonnegative
/// finite entries summing to 1 within 1e-9.
void validate_distribution(std::span<const double> weights,
                           std::size_t expected);

} // namespace bellsim
