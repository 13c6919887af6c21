// Copyright 2026 The bellsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bellsim/harness.hpp"

namespace bellsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Environment variable consulted for the default --seed.
inline constexpr const char *kSeedEnv = "BELLSIM_SEED";
inline constexpr std::uint64_t kDefaultSeed = 1;

/// Bad arguments or input data; maps to exit code 2.
class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Filesystem failure; maps to exit code 1.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

StateKind parse_state(const std::string &name);

/// Report JSON for a CHSH analysis: name, s_mean, s_std_error, per_pair,
/// bound, violated_2sigma, violated_5sigma, seed, source.
nlohmann::json chsh_report_json(const ChshAnalysis &analysis,
                                std::optional<std::uint64_t> seed,
                                const std::string &source);

/// Runs the command line `args` (args[0] is the program name) and returns
/// the process exit code. Normal output goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string> &args, std::ostream &out,
            std::ostream &err);

} // namespace bellsim::cli
