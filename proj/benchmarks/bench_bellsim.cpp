// Copyright 2026 The bellsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <numbers>

#include "bellsim/harness.hpp"

using namespace bellsim;

namespace {

constexpr double kPi = std::numbers::pi;
const ChshAngles kCanonical{0.0, -kPi / 2, 3 * kPi / 4, -3 * kPi / 4};

void BM_QuantumTrials(benchmark::State &state) {
    const auto schedule = SettingsSchedule::chsh(kCanonical);
    const EntangledState singlet = make_state(StateKind::SpinAnticorrelated);
    const auto n = static_cast<std::uint64_t>(state.range(0));
    const auto workers = static_cast<unsigned>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_trials(singlet, schedule, n, 1, workers));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_QuantumTrials)->Args({1 << 20, 1})->Args({1 << 20, 4})->UseRealTime();

void BM_LhvTrials(benchmark::State &state) {
    const auto schedule = SettingsSchedule::chsh(kCanonical);
    const LhvModel &model = find_builtin_model("quantum_mimic_attempt");
    const auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_trials(std::cref(model), schedule, n, 1));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LhvTrials)->Arg(1 << 18);

void BM_Quadrature(benchmark::State &state) {
    const LhvModel &model = find_builtin_model("sign_model");
    const auto nodes = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            quadrature_correlation(model, 0.3, 2.1, nodes));
    }
}
BENCHMARK(BM_Quadrature)->Arg(1 << 12)->Arg(1 << 14)->Arg(1 << 16);

void BM_AnalyzeChsh(benchmark::State &state) {
    const auto log = run_trials(make_state(StateKind::SpinAnticorrelated),
                                SettingsSchedule::chsh(kCanonical), 1 << 20, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(analyze_chsh(tabulate(log)));
    }
}
BENCHMARK(BM_AnalyzeChsh);

void BM_Maximize(benchmark::State &state) {
    const double step = static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            maximize_chsh(StateKind::SpinAnticorrelated, step));
    }
}
BENCHMARK(BM_Maximize)->Arg(15)->Arg(5)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
