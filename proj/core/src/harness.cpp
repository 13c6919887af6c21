// Copyright 2026 The bellsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "bellsim/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "bellsim/rng.hpp"

namespace bellsim {

namespace {

constexpr std::uint64_t kTrialStreamTag = 0x747269616c73ULL; // "trials"
constexpr double kRefineFloor = 1e-8;

/// Cumulative sampler over the four outcome cells; zero cells never fire.
class OutcomeSampler {
  public:
    explicit OutcomeSampler(const JointDistribution &j)
        : p_{j.pp, j.pm, j.mp, j.mm} {
        for (std::size_t k = 0; k < p_.size(); ++k) {
            p_[k] = std::max(0.0, p_[k]);
            total_ += p_[k];
            if (p_[k] > 0.0) {
                last_ = k;
            }
        }
    }

    std::pair<Outcome, Outcome> draw(double u) const noexcept {
        const double r = u * total_;
        double cum = 0.0;
        std::size_t cell = last_;
        for (std::size_t k = 0; k < p_.size(); ++k) {
            if (p_[k] <= 0.0) {
                continue;
            }
            cum += p_[k];
            if (r < cum || k == last_) {
                cell = k;
                break;
            }
        }
        const Outcome d = cell < 2 ? Outcome::Plus : Outcome::Minus;
        const Outcome g = cell % 2 == 0 ? Outcome::Plus : Outcome::Minus;
        return {d, g};
    }

  private:
    std::array<double, 4> p_;
    double total_ = 0.0;
    std::size_t last_ = 3;
};

double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

} // namespace

SettingsSchedule SettingsSchedule::chsh(const ChshAngles &a,
                                        SchedulePolicy policy) {
    return SettingsSchedule{{{a.delta, a.gamma},
                             {a.delta, a.gamma_prime},
                             {a.delta_prime, a.gamma},
                             {a.delta_prime, a.gamma_prime}},
                            policy};
}

std::string describe(const TrialSource &source) {
    if (const auto *state = std::get_if<EntangledState>(&source)) {
        return std::string{"quantum "} + to_string(state->kind());
    }
    return "lhv " +
           std::get<std::reference_wrapper<const LhvModel>>(source).get().name();
}

TrialLog run_trials(const TrialSource &source, const SettingsSchedule &schedule,
                    std::uint64_t n, std::uint64_t seed, unsigned workers) {
    if (n == 0) {
        throw std::invalid_argument("trials must be >= 1");
    }
    if (schedule.pairs.empty()) {
        throw std::invalid_argument("settings schedule has no pairs");
    }
    const std::size_t npairs = schedule.pairs.size();

    std::vector<OutcomeSampler> samplers;
    const auto *state = std::get_if<EntangledState>(&source);
    const LhvModel *model = nullptr;
    if (state != nullptr) {
        samplers.reserve(npairs);
        for (const auto &p : schedule.pairs) {
            samplers.emplace_back(joint_distribution(*state, p.delta, p.gamma));
        }
    } else {
        model = &std::get<std::reference_wrapper<const LhvModel>>(source).get();
    }

    TrialLog log;
    log.schedule = schedule;
    log.seed = seed;
    log.source_description = describe(source);
    log.records.resize(n);

    const std::uint64_t blocks = (n + kTrialBlockSize - 1) / kTrialBlockSize;
    auto run_block = [&](std::uint64_t b) {
        Rng rng = Rng::substream(seed, kTrialStreamTag, b);
        const std::uint64_t begin = b * kTrialBlockSize;
        const std::uint64_t end = std::min(n, begin + kTrialBlockSize);
        for (std::uint64_t i = begin; i < end; ++i) {
            const std::size_t k =
                schedule.policy == SchedulePolicy::RoundRobin
                    ? static_cast<std::size_t>(i % npairs)
                    : static_cast<std::size_t>(rng.below(npairs));
            TrialRecord &rec = log.records[i];
            rec.pair_index = static_cast<std::uint32_t>(k);
            if (model == nullptr) {
                std::tie(rec.outcome_d, rec.outcome_g) =
                    samplers[k].draw(rng.uniform());
            } else {
                std::tie(rec.outcome_d, rec.outcome_g) =
                    sample_pair(*model, schedule.pairs[k].delta,
                                schedule.pairs[k].gamma, rng);
            }
        }
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
    return log;
}

std::uint64_t CountsTable::total() const noexcept {
    std::uint64_t t = 0;
    for (const auto &c : counts) {
        t += c.total();
    }
    return t;
}

CountsTable tabulate(const TrialLog &log) {
    CountsTable table;
    table.pairs = log.schedule.pairs;
    table.counts.assign(table.pairs.size(), PairCounts{});
    for (const auto &r : log.records) {
        if (r.pair_index >= table.counts.size()) {
            throw std::out_of_range("trial record has invalid pair index " +
                                    std::to_string(r.pair_index));
        }
        table.counts[r.pair_index].add(r.outcome_d, r.outcome_g);
    }
    return table;
}

ChshAnalysis analyze_chsh(const CountsTable &counts,
                          const ChshMapping &mapping) {
    ChshAnalysis out;
    double variance = 0.0;
    constexpr std::array<double, 4> signs{1.0, 1.0, 1.0, -1.0};
    for (std::size_t t = 0; t < 4; ++t) {
        const std::size_t idx = mapping.index[t];
        if (idx >= counts.counts.size() || counts.counts[idx].total() == 0) {
            throw MissingSettingsPair(std::string{"settings pair "} +
                                      kChshPairLabels[t] + " has no trials");
        }
        const PairCounts &c = counts.counts[idx];
        PairEstimate &est = out.per_pair[t];
        est.pair = kChshPairLabels[t];
        est.n = c.total();
        est.correlation = c.correlation();
        est.std_error = c.std_error();
        out.s_mean += signs[t] * est.correlation;
        variance += est.std_error * est.std_error;
    }
    out.s_std_error = std::sqrt(variance);
    const double margin = std::abs(out.s_mean) - 2.0;
    out.violated_2sigma =
        margin > std::max(kViolationTolerance, 2.0 * out.s_std_error);
    out.violated_5sigma =
        margin > std::max(kViolationTolerance, 5.0 * out.s_std_error);
    return out;
}

ChshOptimum maximize_chsh(StateKind kind, double coarse_step_deg,
                          int refine_iters, const MaximizeOptions &options) {
    if (!(coarse_step_deg > 0.0 && coarse_step_deg <= 15.0)) {
        throw std::invalid_argument("coarse_step must be in (0, 15] degrees");
    }
    if (refine_iters < 0) {
        throw std::invalid_argument("refine_iters must be >= 0");
    }

    auto objective = [kind](const std::array<double, 4> &x) {
        // x = (delta, delta', gamma, gamma')
        const double s = closed_form_correlation(kind, x[0], x[2]) +
                         closed_form_correlation(kind, x[0], x[3]) +
                         closed_form_correlation(kind, x[1], x[2]) -
                         closed_form_correlation(kind, x[1], x[3]);
        return std::abs(s);
    };

    const auto grid_n =
        static_cast<std::size_t>(std::ceil(360.0 / coarse_step_deg - 1e-9));
    std::vector<double> grid(grid_n);
    for (std::size_t i = 0; i < grid_n; ++i) {
        grid[i] = deg2rad(static_cast<double>(i) * coarse_step_deg);
    }

    std::array<double, 4> best{};
    double best_value = -1.0;
    if (options.equal_angles) {
        for (double a : grid) {
            const std::array<double, 4> x{a, a, a, a};
            const double v = objective(x);
            if (v > best_value) {
                best_value = v;
                best = x;
            }
        }
    } else {
        // The closed forms depend on angle differences only, so delta is
        // pinned to 0 on the grid; refinement still moves it.
        std::vector<double> table(grid_n * grid_n);
        for (std::size_t i = 0; i < grid_n; ++i) {
            for (std::size_t j = 0; j < grid_n; ++j) {
                table[i * grid_n + j] =
                    closed_form_correlation(kind, grid[i], grid[j]);
            }
        }
        for (std::size_t b = 0; b < grid_n; ++b) {
            for (std::size_t c = 0; c < grid_n; ++c) {
                for (std::size_t d = 0; d < grid_n; ++d) {
                    const double v =
                        std::abs(table[c] + table[d] + table[b * grid_n + c] -
                                 table[b * grid_n + d]);
                    if (v > best_value) {
                        best_value = v;
                        best = {grid[0], grid[b], grid[c], grid[d]};
                    }
                }
            }
        }
    }

    double step = deg2rad(coarse_step_deg) / 2.0;
    for (int iter = 0; iter < refine_iters && step >= kRefineFloor; ++iter) {
        bool improved = false;
        const std::size_t coords = options.equal_angles ? 1 : 4;
        for (std::size_t k = 0; k < coords; ++k) {
            for (const double dir : {1.0, -1.0}) {
                std::array<double, 4> trial = best;
                if (options.equal_angles) {
                    for (auto &t : trial) {
                        t += dir * step;
                    }
                } else {
                    trial[k] += dir * step;
                }
                const double v = objective(trial);
                if (v > best_value) {
                    best_value = v;
                    best = trial;
                    improved = true;
                }
            }
        }
        if (!improved) {
            step /= 2.0;
        }
    }

    ChshOptimum out;
    out.angles = ChshAngles{best[0], best[1], best[2], best[3]};
    out.s_star = best_value;
    return out;
}

std::vector<WignerScanRow> wigner_scan(double theta1, double theta3,
                                       std::size_t steps) {
    if (steps < 3) {
        throw std::invalid_argument("wigner scan needs at least 3 steps");
    }
    const QuantumBornSource singlet{make_state(StateKind::SpinAnticorrelated)};
    std::vector<WignerScanRow> rows;
    rows.reserve(steps);
    for (std::size_t k = 0; k < steps; ++k) {
        const double theta2 = theta1 + (theta3 - theta1) *
                                           static_cast<double>(k) /
                                           static_cast<double>(steps - 1);
        const InequalityReport r = wigner_check(singlet, theta1, theta2, theta3);
        rows.push_back({theta2, r.lhs, r.bound, r.margin});
    }
    return rows;
}

} // namespace bellsim
