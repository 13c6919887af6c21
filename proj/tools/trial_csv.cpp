// Copyright 2026 The bellsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "trial_csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <string_view>

namespace bellsim::cli {

namespace {

constexpr std::string_view kAnglePrefix = "# angles_deg: ";
constexpr std::string_view kColumnHeader = "pair,outcome_d,outcome_g";
constexpr std::array<std::string_view, 4> kAngleKeys = {
    "delta", "delta_prime", "gamma", "gamma_prime"};

double parse_double(std::string_view text, std::size_t line,
                    std::string_view what) {
    double value = 0.0;
    const auto *first = text.data();
    const auto *last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
        throw TrialCsvError(line, "invalid " + std::string{what} + " '" +
                                      std::string{text} + "'");
    }
    return value;
}

Outcome parse_outcome(std::string_view text, std::size_t line) {
    if (text == "+1" || text == "1") {
        return Outcome::Plus;
    }
    if (text == "-1") {
        return Outcome::Minus;
    }
    throw TrialCsvError(line, "outcome must be +1 or -1");
}

std::string_view outcome_text(Outcome o) {
    return o == Outcome::Plus ? "+1" : "-1";
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(s.substr(start));
            return parts;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

ChshAngles parse_angle_header(std::string_view line) {
    if (line.substr(0, kAnglePrefix.size()) != kAnglePrefix) {
        throw TrialCsvError(1, "expected header '# angles_deg: delta=...'");
    }
    const auto fields = split(line.substr(kAnglePrefix.size()), ',');
    if (fields.size() != kAngleKeys.size()) {
        throw TrialCsvError(1, "angle header needs delta, delta_prime, gamma, "
                               "gamma_prime");
    }
    std::array<double, 4> values{};
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const auto eq = fields[i].find('=');
        if (eq == std::string_view::npos ||
            fields[i].substr(0, eq) != kAngleKeys[i]) {
            throw TrialCsvError(1, "expected '" + std::string{kAngleKeys[i]} +
                                       "=<degrees>'");
        }
        values[i] = parse_double(fields[i].substr(eq + 1), 1, "angle");
    }
    return {values[0], values[1], values[2], values[3]};
}

} // namespace

std::string format_double(double value) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(),
                                         value);
    return std::string(buf.data(), ptr);
}

void write_trial_csv(std::ostream &out, const TrialLog &log,
                     const ChshAngles &angles_deg) {
    out << kAnglePrefix << "delta=" << format_double(angles_deg.delta)
        << ",delta_prime=" << format_double(angles_deg.delta_prime)
        << ",gamma=" << format_double(angles_deg.gamma)
        << ",gamma_prime=" << format_double(angles_deg.gamma_prime) << '\n'
        << kColumnHeader << '\n';
    for (const auto &r : log.records) {
        out << kChshPairLabels.at(r.pair_index) << ','
            << outcome_text(r.outcome_d) << ',' << outcome_text(r.outcome_g)
            << '\n';
    }
}

CountsTable TrialCsv::counts() const {
    constexpr double rad = std::numbers::pi / 180.0;
    const ChshAngles radians{angles_deg.delta * rad,
                             angles_deg.delta_prime * rad,
                             angles_deg.gamma * rad,
                             angles_deg.gamma_prime * rad};
    TrialLog log;
    log.schedule = SettingsSchedule::chsh(radians);
    log.records = records;
    return tabulate(log);
}

TrialCsv read_trial_csv(std::istream &in) {
    TrialCsv out;
    std::string line;
    std::size_t number = 0;

    auto next_line = [&]() -> bool {
        if (!std::getline(in, line)) {
            return false;
        }
        ++number;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        return true;
    };

    if (!next_line()) {
        throw TrialCsvError(1, "file is empty");
    }
    out.angles_deg = parse_angle_header(line);
    if (!next_line() || line != kColumnHeader) {
        throw TrialCsvError(2, "expected column header '" +
                                   std::string{kColumnHeader} + "'");
    }
    while (next_line()) {
        if (line.empty()) {
            continue;
        }
        const auto fields = split(line, ',');
        if (fields.size() != 3) {
            throw TrialCsvError(number, "expected 3 fields, got " +
                                            std::to_string(fields.size()));
        }
        TrialRecord rec;
        bool found = false;
        for (std::size_t k = 0; k < kChshPairLabels.size(); ++k) {
            if (fields[0] == kChshPairLabels[k]) {
                rec.pair_index = static_cast<std::uint32_t>(k);
                found = true;
                break;
            }
        }
        if (!found) {
            throw TrialCsvError(number, "pair must be one of dg, dg', d'g, "
                                        "d'g'");
        }
        rec.outcome_d = parse_outcome(fields[1], number);
        rec.outcome_g = parse_outcome(fields[2], number);
        out.records.push_back(rec);
    }
    return out;
}

} // namespace bellsim::cli
