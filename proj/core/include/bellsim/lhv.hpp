// Copyright 2026 The bellsim Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file
 * Local hidden-variable models: one density over a scalar hidden variable
 * shared by every pair of analyzer settings, plus one deterministic +/-1
 * response function per wing.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bellsim/qstate.hpp"
#include "bellsim/rng.hpp"

namespace bellsim {

/// Tolerance of the normalization check performed on every density.
inline constexpr double kDensityNormTolerance = 1e-9;
/// Minimum node count accepted by quadrature_correlation.
inline constexpr std::size_t kMinQuadratureNodes = 1000;

/// Support of a density; either bound may be infinite.
struct Support {
    double lower = 0.0;
    double upper = 0.0;

    [[nodiscard]] bool bounded() const noexcept;
};

class Density {
  public:
    using Pdf = std::function<double(double)>;
    using Sampler = std::function<double(Rng &)>;

    Density(Support support, Pdf pdf, Sampler sampler);

    [[nodiscard]] const Support &support() const noexcept { return support_; }
    [[nodiscard]] double pdf(double lambda) const { return pdf_(lambda); }
    double sample(Rng &rng) const { return sampler_(rng); }

    /// Integral of the pdf over the support. Midpoint rule for bounded
    /// supports, tangent substitution otherwise.
    [[nodiscard]] double total_mass() const;

    static Density uniform(double lower, double upper);

  private:
    Support support_;
    Pdf pdf_;
    Sampler sampler_;
};

/// One wing's deterministic response. It receives the hidden variable and
/// that wing's own analyzer angle, nothing else.
using ResponseFunction = std::function<Outcome(double lambda, double angle)>;

class LhvModel {
  public:
    /// Throws std::invalid_argument if the density does not integrate to 1
    /// within kDensityNormTolerance.
    LhvModel(std::string name, std::string description, Density density,
             ResponseFunction response_d, ResponseFunction response_g);

    [[nodiscard]] const std::string &name() const noexcept { return name_; }
    [[nodiscard]] const std::string &description() const noexcept {
        return description_;
    }
    [[nodiscard]] const Density &density() const noexcept { return density_; }

    [[nodiscard]] Outcome response_d(double lambda, double delta) const {
        return response_d_(lambda, delta);
    }
    [[nodiscard]] Outcome response_g(double lambda, double gamma) const {
        return response_g_(lambda, gamma);
    }

  private:
    std::string name_;
    std::string description_;
    Density density_;
    ResponseFunction response_d_;
    ResponseFunction response_g_;
};

/// Raised when quadrature is requested for a density with unbounded support.
class QuadratureUnavailable : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

struct CorrelationEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n_samples = 0;
};

/// Draws one hidden variable and feeds it to both wings.
std::pair<Outcome, Outcome> sample_pair(const LhvModel &model, double delta,
                                        double gamma, Rng &rng);

/**
 * Integral of rho(lambda) d(lambda) g(lambda) over `nodes` equal cells,
 * three-point Gauss-Legendre per cell.
 *
 * Cells whose endpoint responses differ are split at the located jump so
 * piecewise-constant responses are integrated without an O(h) edge error.
 * A response that flips twice inside one cell is not detected.
 */
double quadrature_correlation(const LhvModel &model, double delta, double gamma,
                              std::size_t nodes = 1u << 14);

/// Monte Carlo mean of d*g over n draws. Trials are split into blocks with
/// independent substreams, so the result does not depend on `workers`.
CorrelationEstimate estimate_correlation(const LhvModel &model, double delta,
                                         double gamma, std::uint64_t n,
                                         std::uint64_t seed,
                                         unsigned workers = 1);

/// sign_model, constant_model, quantum_mimic_attempt.
const std::vector<LhvModel> &builtin_models();

/// Throws std::invalid_argument naming the known models if not found.
const LhvModel &find_builtin_model(std::string_view name);

} // namespace bellsim
