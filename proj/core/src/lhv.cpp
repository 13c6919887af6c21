// Copyright 2026 The bellsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "bellsim/lhv.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <thread>

namespace bellsim {

namespace {

constexpr std::size_t kNormalizationNodes = 1u << 18;
constexpr std::uint64_t kLhvStreamTag = 0x6c68765f6d63ULL; // "lhv_mc"
constexpr std::uint64_t kBlockSize = 1u << 16;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

Outcome sign_of(double x) noexcept {
    return x >= 0.0 ? Outcome::Plus : Outcome::Minus;
}

/// Neumaier-compensated running sum.
class CompensatedSum {
  public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    [[nodiscard]] double value() const noexcept { return sum_ + carry_; }

  private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

/// Three-point Gauss-Legendre integral of f over [lo, hi].
template <class F> double gauss3(F &&f, double lo, double hi) {
    constexpr double kNode = 0.77459666924148337704; // sqrt(3/5)
    const double half = (hi - lo) / 2;
    const double mid = lo + half;
    return half * (5.0 * f(mid - half * kNode) + 8.0 * f(mid) +
                   5.0 * f(mid + half * kNode)) /
           9.0;
}

/// Locate the switch point of f inside [lo, hi] given f(lo) != f(hi).
template <class F> double bisect_jump(F &&f, double lo, double hi) {
    const Outcome left = f(lo);
    for (int i = 0; i < 64 && hi - lo > 0.0; ++i) {
        const double mid = lo + (hi - lo) / 2;
        if (mid <= lo || mid >= hi) {
            break;
        }
        if (f(mid) == left) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo + (hi - lo) / 2;
}

Density abs_cos_density() {
    // rho = |cos(lambda)| / 4 on [0, 2 pi). asin(U) has density cos on
    // [0, pi/2]; reflect into one of the four quarter periods.
    auto pdf = [](double lambda) {
        if (lambda < 0.0 || lambda >= kTwoPi) {
            return 0.0;
        }
        return std::abs(std::cos(lambda)) / 4.0;
    };
    auto sampler = [](Rng &rng) {
        const double x = std::asin(rng.uniform());
        switch (rng.below(4)) {
        case 0:
            return x;
        case 1:
            return std::numbers::pi - x;
        case 2:
            return std::numbers::pi + x;
        default:
            return kTwoPi - x;
        }
    };
    return Density{{0.0, kTwoPi}, pdf, sampler};
}

std::vector<LhvModel> make_builtins() {
    std::vector<LhvModel> models;
    auto sign_d = [](double lambda, double delta) {
        return sign_of(std::cos(lambda - delta));
    };
    auto sign_g = [](double lambda, double gamma) {
        return flip(sign_of(std::cos(lambda - gamma)));
    };

    models.emplace_back(
        "sign_model",
        "lambda uniform on [0, 2pi); d = sgn cos(lambda - delta), "
        "g = -sgn cos(lambda - gamma)",
        Density::uniform(0.0, kTwoPi), sign_d, sign_g);

    models.emplace_back(
        "constant_model", "d = +1 and g = -1 for every lambda",
        Density::uniform(0.0, kTwoPi),
        [](double, double) { return Outcome::Plus; },
        [](double, double) { return Outcome::Minus; });

    // Sign responses under the density |cos lambda|/4. This reproduces the
    // singlet correlation -cos(gamma) exactly while delta = 0, but the
    // density is tied to that one axis, so a second delta setting breaks it.
    models.emplace_back(
        "quantum_mimic_attempt",
        "lambda ~ |cos lambda|/4 on [0, 2pi); sign responses as sign_model; "
        "matches -cos(gamma - delta) only for delta = 0",
        abs_cos_density(), sign_d, sign_g);
    return models;
}

} // namespace

bool Support::bounded() const noexcept {
    return std::isfinite(lower) && std::isfinite(upper);
}

Density::Density(Support support, Pdf pdf, Sampler sampler)
    : support_{support}, pdf_{std::move(pdf)}, sampler_{std::move(sampler)} {
    if (!(support_.lower < support_.upper)) {
        throw std::invalid_argument("density support must be nonempty");
    }
    if (!pdf_ || !sampler_) {
        throw std::invalid_argument("density needs a pdf and a sampler");
    }
}

double Density::total_mass() const {
    const std::size_t n = kNormalizationNodes;
    CompensatedSum sum;
    if (support_.bounded()) {
        const double h = (support_.upper - support_.lower) / n;
        for (std::size_t i = 0; i < n; ++i) {
            sum.add(pdf_(support_.lower + (i + 0.5) * h));
        }
        return sum.value() * h;
    }
    // lambda = tan(t) maps the open interval of t onto the support.
    const double t_lo = std::isfinite(support_.lower) ? std::atan(support_.lower)
                                                      : -std::numbers::pi / 2;
    const double t_hi = std::isfinite(support_.upper) ? std::atan(support_.upper)
                                                      : std::numbers::pi / 2;
    const double h = (t_hi - t_lo) / n;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = t_lo + (i + 0.5) * h;
        const double c = std::cos(t);
        sum.add(pdf_(std::tan(t)) / (c * c));
    }
    return sum.value() * h;
}

Density Density::uniform(double lower, double upper) {
    const double width = upper - lower;
    if (!(width > 0.0) || !std::isfinite(width)) {
        throw std::invalid_argument("uniform density needs a finite interval");
    }
    auto pdf = [lower, upper, width](double lambda) {
        return lambda >= lower && lambda < upper ? 1.0 / width : 0.0;
    };
    auto sampler = [lower, width](Rng &rng) {
        return lower + width * rng.uniform();
    };
    return Density{{lower, upper}, pdf, sampler};
}

LhvModel::LhvModel(std::string name, std::string description, Density density,
                   ResponseFunction response_d, ResponseFunction response_g)
    : name_{std::move(name)}, description_{std::move(description)},
      density_{std::move(density)}, response_d_{std::move(response_d)},
      response_g_{std::move(response_g)} {
    if (!response_d_ || !response_g_) {
        throw std::invalid_argument("model '" + name_ +
                                    "' needs both response functions");
    }
    const double mass = density_.total_mass();
    if (!(std::abs(mass - 1.0) <= kDensityNormTolerance)) {
        throw std::invalid_argument("density of model '" + name_ +
                                    "' integrates to " + std::to_string(mass));
    }
}

std::pair<Outcome, Outcome> sample_pair(const LhvModel &model, double delta,
                                        double gamma, Rng &rng) {
    const double lambda = model.density().sample(rng);
    return {model.response_d(lambda, delta), model.response_g(lambda, gamma)};
}

double quadrature_correlation(const LhvModel &model, double delta, double gamma,
                              std::size_t nodes) {
    const Support &support = model.density().support();
    if (!support.bounded()) {
        throw QuadratureUnavailable(
            "model '" + model.name() +
            "' has unbounded support; use Monte Carlo estimation");
    }
    if (nodes < kMinQuadratureNodes) {
        throw std::invalid_argument("quadrature needs at least 1000 nodes");
    }

    auto d = [&](double x) { return model.response_d(x, delta); };
    auto g = [&](double x) { return model.response_g(x, gamma); };
    // Responses are constant on each piece; only the density varies.
    auto pdf = [&](double x) { return model.density().pdf(x); };
    auto piece = [&](double lo, double hi) {
        const double mid = lo + (hi - lo) / 2;
        return gauss3(pdf, lo, hi) * to_int(d(mid)) * to_int(g(mid));
    };

    const double h = (support.upper - support.lower) / nodes;
    CompensatedSum sum;
    double x0 = support.lower;
    Outcome d0 = d(x0);
    Outcome g0 = g(x0);
    for (std::size_t i = 0; i < nodes; ++i) {
        const double x1 =
            i + 1 == nodes ? support.upper : support.lower + (i + 1) * h;
        const Outcome d1 = d(x1);
        const Outcome g1 = g(x1);
        if (d0 == d1 && g0 == g1) {
            sum.add(piece(x0, x1));
        } else {
            std::array<double, 4> cuts{};
            std::size_t count = 0;
            cuts[count++] = x0;
            if (d0 != d1) {
                cuts[count++] = bisect_jump(d, x0, x1);
            }
            if (g0 != g1) {
                cuts[count++] = bisect_jump(g, x0, x1);
            }
            cuts[count++] = x1;
            std::sort(cuts.begin(), cuts.begin() + count);
            for (std::size_t k = 0; k + 1 < count; ++k) {
                if (cuts[k + 1] > cuts[k]) {
                    sum.add(piece(cuts[k], cuts[k + 1]));
                }
            }
        }
        x0 = x1;
        d0 = d1;
        g0 = g1;
    }
    return sum.value();
}

CorrelationEstimate estimate_correlation(const LhvModel &model, double delta,
                                         double gamma, std::uint64_t n,
                                         std::uint64_t seed, unsigned workers) {
    if (n == 0) {
        throw std::invalid_argument("estimate_correlation needs n >= 1");
    }
    const std::uint64_t blocks = (n + kBlockSize - 1) / kBlockSize;
    std::vector<std::int64_t> block_sums(blocks, 0);

    auto run_block = [&](std::uint64_t b) {
        Rng rng = Rng::substream(seed, kLhvStreamTag, b);
        const std::uint64_t begin = b * kBlockSize;
        const std::uint64_t end = std::min(n, begin + kBlockSize);
        std::int64_t acc = 0;
        for (std::uint64_t i = begin; i < end; ++i) {
            const auto [od, og] = sample_pair(model, delta, gamma, rng);
            acc += to_int(od) * to_int(og);
        }
        block_sums[b] = acc;
    };

    const unsigned threads =
        static_cast<unsigned>(std::clamp<std::uint64_t>(workers, 1, blocks));
    if (threads == 1) {
        for (std::uint64_t b = 0; b < blocks; ++b) {
            run_block(b);
        }
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                for (std::uint64_t b = w; b < blocks; b += threads) {
                    run_block(b);
                }
            });
        }
    }

    std::int64_t sum = 0;
    for (const auto s : block_sums) {
        sum += s;
    }
    const double nd = static_cast<double>(n);
    CorrelationEstimate est;
    est.n_samples = n;
    est.mean = static_cast<double>(sum) / nd;
    if (n > 1) {
        // Every product is +/-1, so sum of squares is n exactly.
        const double sd = static_cast<double>(sum);
        const double var = std::max(0.0, (nd - sd * sd / nd) / (nd - 1.0));
        est.std_error = std::sqrt(var / nd);
    }
    return est;
}

const std::vector<LhvModel> &builtin_models() {
    static const std::vector<LhvModel> models = make_builtins();
    return models;
}

const LhvModel &find_builtin_model(std::string_view name) {
    for (const auto &m : builtin_models()) {
        if (m.name() == name) {
            return m;
        }
    }
    std::string known;
    for (const auto &m : builtin_models()) {
        known += known.empty() ? "" : ", ";
        known += m.name();
    }
    throw std::invalid_argument("unknown model '" + std::string{name} +
                                "' (known: " + known + ")");
}

} // namespace bellsim
