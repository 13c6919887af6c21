// Copyright 2026 The bellsim Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file
 * Trial CSV: one line per trial of a four-setting CHSH run.
 *
 *   # angles_deg: delta=<f>,delta_prime=<f>,gamma=<f>,gamma_prime=<f>
 *   pair,outcome_d,outcome_g
 *   dg,+1,-1
 *   d'g',-1,-1
 *
 * `pair` is one of dg, dg', d'g, d'g'. UTF-8, LF line endings.
 */

#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "bellsim/harness.hpp"

namespace bellsim::cli {

class TrialCsvError : public std::runtime_error {
  public:
    TrialCsvError(std::size_t line, const std::string &message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message),
          line_{line} {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// The log's schedule must be the CHSH schedule built from `angles_deg`.
void write_trial_csv(std::ostream &out, const TrialLog &log,
                     const ChshAngles &angles_deg);

struct TrialCsv {
    ChshAngles angles_deg;
    std::vector<TrialRecord> records;

    /// Counts per CHSH pair, angles converted to radians.
    [[nodiscard]] CountsTable counts() const;
};

TrialCsv read_trial_csv(std::istream &in);

} // namespace bellsim::cli
