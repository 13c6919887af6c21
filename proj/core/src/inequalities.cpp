// Copyright 2026 The bellsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "bellsim/inequalities.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "bellsim/rng.hpp"

namespace bellsim {

namespace {

constexpr double kAngleMatchTolerance = 1e-12;
constexpr double kDistributionTolerance = 1e-9;

bool same_angle(double a, double b) noexcept {
    return std::abs(a - b) <= kAngleMatchTolerance;
}

std::string format_pair(double delta, double gamma) {
    std::ostringstream os;
    os.precision(17);
    os << "(delta=" << delta << " rad, gamma=" << gamma << " rad)";
    return os.str();
}

JointDistribution require_joint(const CorrelationSource &source, double delta,
                                double gamma) {
    auto joint = source.joint(delta, gamma);
    if (!joint) {
        throw JointUnavailable("source '" + source.describe() +
                               "' provides no joint probabilities");
    }
    return *joint;
}

/// Fills the tolerance and violation flag from margin and std_error.
void finish(InequalityReport &r) {
    r.margin = r.lhs - r.bound;
    r.tolerance = std::max(kViolationTolerance, kViolationSigmas * r.std_error);
    r.violated = r.margin > r.tolerance;
}

double quadrature_sum(std::initializer_list<double> values) {
    double acc = 0.0;
    for (double v : values) {
        acc += v * v;
    }
    return std::sqrt(acc);
}

std::vector<std::pair<std::string, double>>
chsh_angle_echo(const ChshAngles &a) {
    return {{"delta", a.delta},
            {"delta_prime", a.delta_prime},
            {"gamma", a.gamma},
            {"gamma_prime", a.gamma_prime}};
}

Outcome outcome_at(std::size_t bit_index, std::size_t index,
                   std::size_t width) noexcept {
    // Bit 0 of a slot selects +1, so index 0 is the all-plus assignment.
    const std::size_t shift = width - 1 - bit_index;
    return ((index >> shift) & 1u) == 0 ? Outcome::Plus : Outcome::Minus;
}

} // namespace

CorrelationSign correlation_sign(StateKind kind) noexcept {
    return is_anticorrelated(kind) ? CorrelationSign::Anticorrelated
                                   : CorrelationSign::Correlated;
}

double CorrelationSource::std_error(double delta, double gamma) const {
    const std::uint64_t n = sample_count(delta, gamma);
    if (n == 0) {
        return 0.0;
    }
    const double e = correlation(delta, gamma);
    return std::sqrt(std::max(0.0, 1.0 - e * e) / static_cast<double>(n));
}

// --- quantum sources ------------------------------------------------------

double QuantumClosedFormSource::correlation(double delta, double gamma) const {
    return closed_form_correlation(kind_, delta, gamma);
}

std::optional<JointDistribution>
QuantumClosedFormSource::joint(double delta, double gamma) const {
    const double e = correlation(delta, gamma);
    const double same = (1.0 + e) / 4.0;
    const double diff = (1.0 - e) / 4.0;
    return JointDistribution{same, diff, diff, same};
}

std::string QuantumClosedFormSource::describe() const {
    return std::string{"quantum closed form ("} + to_string(kind_) + ")";
}

double QuantumBornSource::correlation(double delta, double gamma) const {
    return bellsim::correlation(state_, delta, gamma);
}

std::optional<JointDistribution> QuantumBornSource::joint(double delta,
                                                          double gamma) const {
    return joint_distribution(state_, delta, gamma);
}

std::string QuantumBornSource::describe() const {
    return std::string{"quantum Born rule ("} + to_string(state_.kind()) + ")";
}

// --- LHV source -----------------------------------------------------------

LhvSource::LhvSource(const LhvModel &model, Method method, std::uint64_t n,
                     std::uint64_t seed)
    : model_{&model}, method_{method}, n_{n}, seed_{seed} {
    if (method_ == Method::Quadrature && n_ < kMinQuadratureNodes) {
        throw std::invalid_argument("quadrature needs at least 1000 nodes");
    }
    if (method_ == Method::MonteCarlo && n_ == 0) {
        throw std::invalid_argument("Monte Carlo needs n >= 1");
    }
}

double LhvSource::correlation(double delta, double gamma) const {
    if (method_ == Method::Quadrature) {
        return quadrature_correlation(*model_, delta, gamma, n_);
    }
    // Each settings pair gets its own stream so pairs are independent.
    const std::uint64_t pair_seed =
        mix64(seed_ ^ mix64(std::bit_cast<std::uint64_t>(delta)) ^
              mix64(~std::bit_cast<std::uint64_t>(gamma)));
    return estimate_correlation(*model_, delta, gamma, n_, pair_seed).mean;
}

std::uint64_t LhvSource::sample_count(double, double) const {
    return method_ == Method::MonteCarlo ? n_ : 0;
}

std::string LhvSource::describe() const {
    std::ostringstream os;
    os << "lhv " << model_->name() << " ("
       << (method_ == Method::Quadrature ? "quadrature, nodes="
                                         : "monte carlo, n=")
       << n_ << ")";
    return os.str();
}

// --- empirical source -----------------------------------------------------

EmpiricalSource::EmpiricalSource(std::vector<Entry> entries,
                                 std::string description)
    : entries_{std::move(entries)}, description_{std::move(description)} {
    if (entries_.empty()) {
        throw std::invalid_argument("empirical source needs at least one "
                                    "settings pair");
    }
    for (const auto &e : entries_) {
        if (e.counts.total() == 0) {
            throw std::invalid_argument("settings pair " +
                                        format_pair(e.delta, e.gamma) +
                                        " has no trials");
        }
    }
}

const EmpiricalSource::Entry &EmpiricalSource::find(double delta,
                                                    double gamma) const {
    for (const auto &e : entries_) {
        if (same_angle(e.delta, delta) && same_angle(e.gamma, gamma)) {
            return e;
        }
    }
    throw MissingSettingsPair("no data for settings pair " +
                              format_pair(delta, gamma));
}

double EmpiricalSource::correlation(double delta, double gamma) const {
    return find(delta, gamma).counts.correlation();
}

std::optional<JointDistribution> EmpiricalSource::joint(double delta,
                                                        double gamma) const {
    return find(delta, gamma).counts.frequencies();
}

std::uint64_t EmpiricalSource::sample_count(double delta, double gamma) const {
    return find(delta, gamma).counts.total();
}

std::string EmpiricalSource::describe() const { return description_; }

// --- sextet mixture source ------------------------------------------------

SextetMixtureSource::SextetMixtureSource(std::span<const double> weights,
                                         CorrelationSign sign,
                                         std::array<double, 3> angles)
    : sign_{sign}, angles_{angles} {
    validate_distribution(weights, 8);
    std::copy(weights.begin(), weights.end(), weights_.begin());
}

std::size_t SextetMixtureSource::angle_index(double angle) const {
    for (std::size_t i = 0; i < angles_.size(); ++i) {
        if (same_angle(angles_[i], angle)) {
            return i;
        }
    }
    std::ostringstream os;
    os.precision(17);
    os << "sextet mixture has no analyzer angle " << angle << " rad";
    throw MissingSettingsPair(os.str());
}

std::optional<JointDistribution>
SextetMixtureSource::joint(double delta, double gamma) const {
    const std::size_t i = angle_index(delta);
    const std::size_t j = angle_index(gamma);
    const auto sextets = enumerate_sextets(sign_);
    JointDistribution out;
    for (std::size_t k = 0; k < sextets.size(); ++k) {
        const Outcome d = sextets[k].d[i];
        const Outcome g = sextets[k].g[j];
        if (d == Outcome::Plus) {
            (g == Outcome::Plus ? out.pp : out.pm) += weights_[k];
        } else {
            (g == Outcome::Plus ? out.mp : out.mm) += weights_[k];
        }
    }
    return out;
}

double SextetMixtureSource::correlation(double delta, double gamma) const {
    return joint(delta, gamma)->correlation();
}

std::string SextetMixtureSource::describe() const {
    return sign_ == CorrelationSign::Anticorrelated
               ? "sextet mixture (anticorrelated)"
               : "sextet mixture (correlated)";
}

// --- inequalities ---------------------------------------------------------

InequalityReport bell_d1(const CorrelationSource &source, double delta,
                         double gamma, double gamma_prime,
                         CorrelationSign sign) {
    const double e1 = source.correlation(delta, gamma);
    const double e2 = source.correlation(delta, gamma_prime);
    const double e3 = source.correlation(gamma, gamma_prime);
    const double s = sign == CorrelationSign::Anticorrelated ? -1.0 : 1.0;

    InequalityReport r;
    r.name = sign == CorrelationSign::Anticorrelated
                 ? "bell_d1 (anticorrelated)"
                 : "bell_d1 (correlated)";
    r.lhs = std::abs(e1 - e2) + s * e3;
    r.bound = 1.0;
    r.std_error = quadrature_sum({source.std_error(delta, gamma),
                                  source.std_error(delta, gamma_prime),
                                  source.std_error(gamma, gamma_prime)});
    r.angles = {{"delta", delta}, {"gamma", gamma}, {"gamma_prime", gamma_prime}};
    r.source = source.describe();
    finish(r);
    return r;
}

double chsh_s(const CorrelationSource &source, const ChshAngles &a) {
    return source.correlation(a.delta, a.gamma) +
           source.correlation(a.delta, a.gamma_prime) +
           source.correlation(a.delta_prime, a.gamma) -
           source.correlation(a.delta_prime, a.gamma_prime);
}

namespace {

double chsh_std_error(const CorrelationSource &source, const ChshAngles &a) {
    return quadrature_sum({source.std_error(a.delta, a.gamma),
                           source.std_error(a.delta, a.gamma_prime),
                           source.std_error(a.delta_prime, a.gamma),
                           source.std_error(a.delta_prime, a.gamma_prime)});
}

} // namespace

InequalityReport chsh_d4(const CorrelationSource &source,
                         const ChshAngles &angles) {
    InequalityReport r;
    r.name = "chsh_d4";
    r.lhs = std::abs(chsh_s(source, angles));
    r.bound = 2.0;
    r.std_error = chsh_std_error(source, angles);
    r.angles = chsh_angle_echo(angles);
    r.source = source.describe();
    finish(r);
    return r;
}

InequalityReport chsh_d3(const CorrelationSource &source,
                         const ChshAngles &a) {
    InequalityReport r;
    r.name = "chsh_d3";
    r.lhs = std::abs(source.correlation(a.delta, a.gamma) -
                     source.correlation(a.delta, a.gamma_prime)) +
            source.correlation(a.delta_prime, a.gamma_prime) +
            source.correlation(a.delta_prime, a.gamma);
    r.bound = 2.0;
    r.std_error = chsh_std_error(source, a);
    r.angles = chsh_angle_echo(a);
    r.source = source.describe();
    finish(r);
    return r;
}

InequalityReport wigner_check(const CorrelationSource &source, double theta1,
                              double theta2, double theta3,
                              CorrelationSign sign) {
    const JointDistribution j32 = require_joint(source, theta3, theta2);
    const JointDistribution j12 = require_joint(source, theta1, theta2);
    const JointDistribution j13 = require_joint(source, theta1, theta3);

    const double lhs = j32.probability(Outcome::Minus, Outcome::Plus);
    const double rhs1 = j12.probability(Outcome::Plus, Outcome::Plus);
    const double rhs2 = j13.probability(Outcome::Minus, plus_or_minus(sign));

    auto prob_se = [&](double p, double d, double g) {
        const std::uint64_t n = source.sample_count(d, g);
        return n == 0 ? 0.0
                      : std::sqrt(std::max(0.0, p * (1.0 - p)) /
                                  static_cast<double>(n));
    };

    InequalityReport r;
    r.name = "wigner";
    r.lhs = lhs;
    r.bound = rhs1 + rhs2;
    r.std_error = quadrature_sum({prob_se(lhs, theta3, theta2),
                                  prob_se(rhs1, theta1, theta2),
                                  prob_se(rhs2, theta1, theta3)});
    r.angles = {{"theta1", theta1}, {"theta2", theta2}, {"theta3", theta3}};
    r.source = source.describe();
    finish(r);
    return r;
}

// --- enumerations ---------------------------------------------------------

int quartet_s(Outcome d, Outcome g, Outcome d_prime, Outcome g_prime) noexcept {
    return to_int(d) * to_int(g) + to_int(d) * to_int(g_prime) +
           to_int(d_prime) * to_int(g) - to_int(d_prime) * to_int(g_prime);
}

std::array<Quartet, 16> enumerate_quartets() {
    std::array<Quartet, 16> out{};
    for (std::size_t i = 0; i < out.size(); ++i) {
        Quartet &q = out[i];
        q.d_delta = outcome_at(0, i, 4);
        q.g_gamma = outcome_at(1, i, 4);
        q.d_delta_prime = outcome_at(2, i, 4);
        q.g_gamma_prime = outcome_at(3, i, 4);
        q.s_value =
            quartet_s(q.d_delta, q.g_gamma, q.d_delta_prime, q.g_gamma_prime);
    }
    return out;
}

void validate_distribution(std::span<const double> weights,
                           std::size_t expected) {
    if (weights.size() != expected) {
        throw std::invalid_argument("expected " + std::to_string(expected) +
                                    " weights, got " +
                                    std::to_string(weights.size()));
    }
    double sum = 0.0;
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0) {
            throw std::invalid_argument("weights must be finite and >= 0");
        }
        sum += w;
    }
    if (!(std::abs(sum - 1.0) <= kDistributionTolerance)) {
        throw std::invalid_argument("weights sum to " + std::to_string(sum) +
                                    ", not 1");
    }
}

double quartet_mixture_s(std::span<const double> weights) {
    validate_distribution(weights, 16);
    const auto quartets = enumerate_quartets();
    double s = 0.0;
    for (std::size_t i = 0; i < quartets.size(); ++i) {
        s += weights[i] * quartets[i].s_value;
    }
    return s;
}

std::array<Sextet, 8> enumerate_sextets(CorrelationSign sign) {
    std::array<Sextet, 8> out{};
    for (std::size_t i = 0; i < out.size(); ++i) {
        Sextet &s = out[i];
        s.sign = sign;
        for (std::size_t j = 0; j < 3; ++j) {
            s.d[j] = outcome_at(j, i, 3);
            s.g[j] = sign == CorrelationSign::Anticorrelated ? flip(s.d[j])
                                                             : s.d[j];
        }
    }
    return out;
}

bool matches(const Sextet &sextet, const SextetPattern &pattern) noexcept {
    for (std::size_t j = 0; j < 3; ++j) {
        if (pattern[j] && *pattern[j] != sextet.d[j]) {
            return false;
        }
        if (pattern[3 + j] && *pattern[3 + j] != sextet.g[j]) {
            return false;
        }
    }
    return true;
}

double pattern_probability(std::span<const double> weights,
                           CorrelationSign sign, const SextetPattern &pattern) {
    validate_distribution(weights, 8);
    const auto sextets = enumerate_sextets(sign);
    double p = 0.0;
    for (std::size_t i = 0; i < sextets.size(); ++i) {
        if (matches(sextets[i], pattern)) {
            p += weights[i];
        }
    }
    return p;
}

WignerPatterns wigner_patterns(CorrelationSign sign) noexcept {
    constexpr auto any = std::nullopt;
    const Outcome mp = minus_or_plus(sign);
    const Outcome pm = plus_or_minus(sign);
    const Outcome plus = Outcome::Plus;
    const Outcome minus = Outcome::Minus;
    WignerPatterns w;
    w.lhs = {any, mp, minus, any, plus, pm};
    w.rhs_first = {plus, mp, any, mp, plus, any};
    w.rhs_second = {minus, any, minus, pm, any, pm};
    return w;
}

WignerProbabilities sextet_mixture_probabilities(std::span<const double> weights,
                                                 CorrelationSign sign) {
    const WignerPatterns w = wigner_patterns(sign);
    return {pattern_probability(weights, sign, w.lhs),
            pattern_probability(weights, sign, w.rhs_first),
            pattern_probability(weights, sign, w.rhs_second)};
}

} // namespace bellsim
