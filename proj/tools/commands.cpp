// Copyright 2026 The bellsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"

#include "bellsim/inequalities.hpp"
#include "bellsim/lhv.hpp"
#include "trial_csv.hpp"

namespace bellsim::cli {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

using json = nlohmann::json;

std::uint64_t default_seed() {
    if (const char *env = std::getenv(kSeedEnv); env != nullptr && *env) {
        try {
            return std::stoull(env);
        } catch (const std::exception &) {
            throw UsageError(std::string{kSeedEnv} +
                             " must be a nonnegative integer");
        }
    }
    return kDefaultSeed;
}

ChshAngles to_radians(const ChshAngles &deg) {
    return {deg.delta * kDegToRad, deg.delta_prime * kDegToRad,
            deg.gamma * kDegToRad, deg.gamma_prime * kDegToRad};
}

ChshAngles angles_from(const std::vector<double> &values) {
    if (values.size() != 4) {
        throw UsageError("--angles needs 4 values: delta,delta',gamma,gamma'");
    }
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw UsageError("angles must be finite");
        }
    }
    return {values[0], values[1], values[2], values[3]};
}

void require_finite(double v, const char *name) {
    if (!std::isfinite(v)) {
        throw UsageError(std::string{name} + " must be finite");
    }
}

std::uint64_t checked_trials(long long trials) {
    if (trials < 1) {
        throw UsageError("trials must be ≥ 1");
    }
    return static_cast<std::uint64_t>(trials);
}

void write_file(const std::string &path, const std::string &content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    f << content;
    f.close();
    if (!f) {
        throw IoError("failed writing '" + path + "'");
    }
}

/// Writes to `path`, or to `out` when path is "-".
void emit(const std::string &path, const std::string &content,
          std::ostream &out) {
    if (path == "-") {
        out << content;
    } else {
        write_file(path, content);
    }
}

void print_analysis(std::ostream &out, const ChshAnalysis &a,
                    const std::string &source, std::uint64_t trials) {
    out << "source: " << source << "\ntrials: " << trials << "\n\n";
    out << std::left << std::setw(6) << "pair" << std::right << std::setw(14)
        << "E" << std::setw(14) << "std_error" << std::setw(12) << "n" << '\n';
    out << std::fixed << std::setprecision(6);
    for (const auto &p : a.per_pair) {
        out << std::left << std::setw(6) << p.pair << std::right
            << std::setw(14) << p.correlation << std::setw(14) << p.std_error
            << std::setw(12) << p.n << '\n';
    }
    out << "\nS = " << a.s_mean << " +/- " << a.s_std_error << "  (bound 2)\n"
        << "violated (2 sigma): " << (a.violated_2sigma ? "yes" : "no") << '\n'
        << "violated (5 sigma): " << (a.violated_5sigma ? "yes" : "no") << '\n';
    out.unsetf(std::ios::floatfield);
}

json report_json(const InequalityReport &r) {
    json angles = json::object();
    for (const auto &[name, value] : r.angles) {
        angles[name + "_deg"] = value * kRadToDeg;
    }
    return {{"name", r.name},       {"lhs", r.lhs},
            {"bound", r.bound},     {"margin", r.margin},
            {"std_error", r.std_error}, {"tolerance", r.tolerance},
            {"violated", r.violated}, {"angles", angles},
            {"source", r.source}};
}

// --- chsh-sim -------------------------------------------------------------

struct ChshSimConfig {
    std::string state;
    std::string model;
    std::vector<double> angles{0.0, -90.0, 135.0, -135.0};
    long long trials = 1'000'000;
    std::optional<std::uint64_t> seed;
    std::string policy = "random";
    unsigned workers = 1;
    std::string emit_trials;
    std::string report;
};

int cmd_chsh_sim(const ChshSimConfig &cfg, std::ostream &out) {
    if (cfg.state.empty() == cfg.model.empty()) {
        throw UsageError("give exactly one of --state or --model");
    }
    const ChshAngles deg = angles_from(cfg.angles);
    const std::uint64_t trials = checked_trials(cfg.trials);
    const std::uint64_t seed = cfg.seed.value_or(default_seed());
    const SchedulePolicy policy = cfg.policy == "round-robin"
                                      ? SchedulePolicy::RoundRobin
                                      : SchedulePolicy::UniformRandom;

    const SettingsSchedule schedule =
        SettingsSchedule::chsh(to_radians(deg), policy);
    TrialLog log = cfg.state.empty()
                       ? run_trials(std::cref(find_builtin_model(cfg.model)),
                                    schedule, trials, seed, cfg.workers)
                       : run_trials(make_state(parse_state(cfg.state)),
                                    schedule, trials, seed, cfg.workers);

    if (!cfg.emit_trials.empty()) {
        std::ostringstream csv;
        write_trial_csv(csv, log, deg);
        write_file(cfg.emit_trials, csv.str());
    }

    const ChshAnalysis analysis = analyze_chsh(tabulate(log));
    const json report =
        chsh_report_json(analysis, seed, log.source_description);
    if (cfg.report == "-") {
        out << report.dump(2) << '\n';
        return kExitOk;
    }
    if (!cfg.report.empty()) {
        write_file(cfg.report, report.dump(2) + "\n");
    }
    out << "seed: " << seed << '\n';
    print_analysis(out, analysis, log.source_description, trials);
    return kExitOk;
}

// --- analyze --------------------------------------------------------------

struct AnalyzeConfig {
    std::string input;
    std::string report;
};

int cmd_analyze(const AnalyzeConfig &cfg, std::ostream &out) {
    std::ifstream in(cfg.input, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + cfg.input + "'");
    }
    const TrialCsv data = read_trial_csv(in);
    const ChshAnalysis analysis = analyze_chsh(data.counts());
    const std::string source = "file:" + cfg.input;
    const json report = chsh_report_json(analysis, std::nullopt, source);
    if (cfg.report == "-") {
        out << report.dump(2) << '\n';
        return kExitOk;
    }
    if (!cfg.report.empty()) {
        write_file(cfg.report, report.dump(2) + "\n");
    }
    print_analysis(out, analysis, source, data.records.size());
    return kExitOk;
}

// --- wigner-scan ----------------------------------------------------------

struct WignerScanConfig {
    double theta1 = 0.0;
    double theta3 = 90.0;
    long long steps = 19;
    std::string output = "-";
};

int cmd_wigner_scan(const WignerScanConfig &cfg, std::ostream &out) {
    require_finite(cfg.theta1, "theta1");
    require_finite(cfg.theta3, "theta3");
    if (cfg.steps < 3) {
        throw UsageError("steps must be ≥ 3");
    }
    const auto rows = wigner_scan(cfg.theta1 * kDegToRad,
                                  cfg.theta3 * kDegToRad,
                                  static_cast<std::size_t>(cfg.steps));
    std::ostringstream csv;
    csv << "theta2_deg,lhs,rhs,margin\n";
    for (std::size_t k = 0; k < rows.size(); ++k) {
        // Grid in degrees directly so 45 prints as 45.
        const double theta2_deg =
            cfg.theta1 + (cfg.theta3 - cfg.theta1) * static_cast<double>(k) /
                             static_cast<double>(rows.size() - 1);
        csv << format_double(theta2_deg) << ',' << format_double(rows[k].lhs)
            << ',' << format_double(rows[k].rhs) << ','
            << format_double(rows[k].margin) << '\n';
    }
    emit(cfg.output, csv.str(), out);
    return kExitOk;
}

// --- enumerate ------------------------------------------------------------

struct EnumerateConfig {
    std::string format = "text";
    bool sextets = false;
    std::string sign = "anticorrelated";
};

std::string signed_int(int v) { return (v > 0 ? "+" : "") + std::to_string(v); }

int cmd_enumerate(const EnumerateConfig &cfg, std::ostream &out) {
    if (cfg.sextets) {
        const CorrelationSign sign = cfg.sign == "correlated"
                                         ? CorrelationSign::Correlated
                                         : CorrelationSign::Anticorrelated;
        const auto sextets = enumerate_sextets(sign);
        if (cfg.format == "json") {
            json rows = json::array();
            for (const auto &s : sextets) {
                rows.push_back({{"d", {to_int(s.d[0]), to_int(s.d[1]),
                                       to_int(s.d[2])}},
                                {"g", {to_int(s.g[0]), to_int(s.g[1]),
                                       to_int(s.g[2])}}});
            }
            out << json{{"sign", cfg.sign}, {"sextets", rows}}.dump(2) << '\n';
            return kExitOk;
        }
        if (cfg.format == "csv") {
            out << "d_theta1,d_theta2,d_theta3,g_theta1,g_theta2,g_theta3\n";
        }
        for (const auto &s : sextets) {
            const char *sep = cfg.format == "csv" ? "," : " ";
            out << signed_int(to_int(s.d[0])) << sep
                << signed_int(to_int(s.d[1])) << sep
                << signed_int(to_int(s.d[2]))
                << (cfg.format == "csv" ? "," : " ; ")
                << signed_int(to_int(s.g[0])) << sep
                << signed_int(to_int(s.g[1])) << sep
                << signed_int(to_int(s.g[2])) << '\n';
        }
        return kExitOk;
    }

    const auto quartets = enumerate_quartets();
    if (cfg.format == "json") {
        json rows = json::array();
        for (std::size_t i = 0; i < quartets.size(); ++i) {
            const auto &q = quartets[i];
            rows.push_back({{"column", i + 1},
                            {"d_delta", to_int(q.d_delta)},
                            {"g_gamma", to_int(q.g_gamma)},
                            {"d_delta_prime", to_int(q.d_delta_prime)},
                            {"g_gamma_prime", to_int(q.g_gamma_prime)},
                            {"S", q.s_value}});
        }
        out << json{{"quartets", rows}}.dump(2) << '\n';
        return kExitOk;
    }
    if (cfg.format == "csv") {
        out << "column,d_delta,g_gamma,d_delta_prime,g_gamma_prime,S\n";
        for (std::size_t i = 0; i < quartets.size(); ++i) {
            const auto &q = quartets[i];
            out << i + 1 << ',' << signed_int(to_int(q.d_delta)) << ','
                << signed_int(to_int(q.g_gamma)) << ','
                << signed_int(to_int(q.d_delta_prime)) << ','
                << signed_int(to_int(q.g_gamma_prime)) << ','
                << signed_int(q.s_value) << '\n';
        }
        return kExitOk;
    }

    auto row = [&](const char *label, auto &&value_of) {
        out << std::left << std::setw(10) << label << std::right;
        for (std::size_t i = 0; i < quartets.size(); ++i) {
            out << (i ? "," : "") << value_of(quartets[i]);
        }
        out << '\n';
    };
    row("d_delta", [](const Quartet &q) { return signed_int(to_int(q.d_delta)); });
    row("g_gamma", [](const Quartet &q) { return signed_int(to_int(q.g_gamma)); });
    row("d_delta'",
        [](const Quartet &q) { return signed_int(to_int(q.d_delta_prime)); });
    row("g_gamma'",
        [](const Quartet &q) { return signed_int(to_int(q.g_gamma_prime)); });
    row("S", [](const Quartet &q) { return signed_int(q.s_value); });
    return kExitOk;
}

// --- lhv-sim --------------------------------------------------------------

struct LhvSimConfig {
    std::string model = "sign_model";
    std::vector<double> angles{0.0, -90.0, 135.0, -135.0};
    long long nodes = 1 << 14;
    long long trials = 100'000;
    std::optional<std::uint64_t> seed;
    unsigned workers = 1;
    std::string report;
};

int cmd_lhv_sim(const LhvSimConfig &cfg, std::ostream &out) {
    const LhvModel &model = find_builtin_model(cfg.model);
    const ChshAngles deg = angles_from(cfg.angles);
    const ChshAngles rad = to_radians(deg);
    const std::uint64_t trials = checked_trials(cfg.trials);
    const std::uint64_t seed = cfg.seed.value_or(default_seed());
    if (cfg.nodes < static_cast<long long>(kMinQuadratureNodes)) {
        throw UsageError("nodes must be ≥ 1000");
    }
    const auto nodes = static_cast<std::size_t>(cfg.nodes);

    const auto schedule = SettingsSchedule::chsh(rad);
    json per_pair = json::array();
    std::ostringstream text;
    text << "model: " << model.name() << " (" << model.description() << ")\n"
        << "seed: " << seed << "\n\n"
        << std::left << std::setw(6) << "pair" << std::right << std::setw(14)
        << "quadrature" << std::setw(14) << "mc_mean" << std::setw(14)
        << "mc_std_error" << '\n'
        << std::fixed << std::setprecision(6);
    for (std::size_t k = 0; k < schedule.pairs.size(); ++k) {
        const auto &p = schedule.pairs[k];
        const double quad = quadrature_correlation(model, p.delta, p.gamma, nodes);
        const CorrelationEstimate est = estimate_correlation(
            model, p.delta, p.gamma, trials, mix64(seed ^ k), cfg.workers);
        text << std::left << std::setw(6) << kChshPairLabels[k] << std::right
            << std::setw(14) << quad << std::setw(14) << est.mean
            << std::setw(14) << est.std_error << '\n';
        per_pair.push_back({{"pair", kChshPairLabels[k]},
                            {"quadrature", quad},
                            {"mc_mean", est.mean},
                            {"mc_std_error", est.std_error},
                            {"n", est.n_samples}});
    }

    const LhvSource source{model, LhvSource::Method::Quadrature,
                           static_cast<std::uint64_t>(nodes)};
    const std::vector<InequalityReport> reports{
        chsh_d4(source, rad), chsh_d3(source, rad),
        bell_d1(source, rad.delta, rad.gamma, rad.gamma_prime,
                CorrelationSign::Anticorrelated)};
    text << '\n';
    json inequalities = json::array();
    for (const auto &r : reports) {
        text << std::left << std::setw(26) << r.name << std::right
            << " lhs = " << std::setw(10) << r.lhs << "  bound = " << r.bound
            << "  violated: " << (r.violated ? "yes" : "no") << '\n';
        inequalities.push_back(report_json(r));
    }

    if (cfg.report != "-") {
        out << text.str();
    }
    if (!cfg.report.empty()) {
        const json doc{{"model", model.name()},
                       {"angles_deg",
                        {{"delta", deg.delta},
                         {"delta_prime", deg.delta_prime},
                         {"gamma", deg.gamma},
                         {"gamma_prime", deg.gamma_prime}}},
                       {"seed", seed},
                       {"per_pair", per_pair},
                       {"s_quadrature", chsh_s(source, rad)},
                       {"inequalities", inequalities}};
        emit(cfg.report, doc.dump(2) + "\n", out);
    }
    return kExitOk;
}

// --- maximize -------------------------------------------------------------

struct MaximizeConfig {
    std::string state = "spin-anticorrelated";
    double coarse_step = 15.0;
    int refine_iters = 500;
    bool equal_angles = false;
    std::string format = "text";
};

int cmd_maximize(const MaximizeConfig &cfg, std::ostream &out) {
    if (!(cfg.coarse_step > 0.0 && cfg.coarse_step <= 15.0)) {
        throw UsageError("coarse-step must be in (0, 15] degrees");
    }
    if (cfg.refine_iters < 0) {
        throw UsageError("refine-iters must be ≥ 0");
    }
    const StateKind kind = parse_state(cfg.state);
    const ChshOptimum opt = maximize_chsh(kind, cfg.coarse_step,
                                          cfg.refine_iters,
                                          {.equal_angles = cfg.equal_angles});
    const ChshAngles &a = opt.angles;
    if (cfg.format == "json") {
        const json doc{{"state", to_string(kind)},
                       {"s_star", opt.s_star},
                       {"angles_deg",
                        {{"delta", a.delta * kRadToDeg},
                         {"delta_prime", a.delta_prime * kRadToDeg},
                         {"gamma", a.gamma * kRadToDeg},
                         {"gamma_prime", a.gamma_prime * kRadToDeg}}}};
        out << doc.dump(2) << '\n';
        return kExitOk;
    }
    out << std::setprecision(10) << "state: " << to_string(kind) << '\n'
        << "s_star: " << opt.s_star << '\n'
        << "angles_deg: delta=" << a.delta * kRadToDeg
        << " delta'=" << a.delta_prime * kRadToDeg
        << " gamma=" << a.gamma * kRadToDeg
        << " gamma'=" << a.gamma_prime * kRadToDeg << '\n';
    return kExitOk;
}

} // namespace

StateKind parse_state(const std::string &name) {
    for (const StateKind k :
         {StateKind::SpinAnticorrelated, StateKind::SpinCorrelated,
          StateKind::PhotonCorrelated, StateKind::PhotonAnticorrelated}) {
        if (name == to_string(k)) {
            return k;
        }
    }
    throw UsageError("unknown state '" + name +
                     "' (known: spin-anticorrelated, spin-correlated, "
                     "photon-correlated, photon-anticorrelated)");
}

json chsh_report_json(const ChshAnalysis &analysis,
                      std::optional<std::uint64_t> seed,
                      const std::string &source) {
    json per_pair = json::array();
    for (const auto &p : analysis.per_pair) {
        per_pair.push_back({{"pair", p.pair},
                            {"E", p.correlation},
                            {"std_error", p.std_error},
                            {"n", p.n}});
    }
    return {{"name", "chsh"},
            {"s_mean", analysis.s_mean},
            {"s_std_error", analysis.s_std_error},
            {"per_pair", per_pair},
            {"bound", 2.0},
            {"violated_2sigma", analysis.violated_2sigma},
            {"violated_5sigma", analysis.violated_5sigma},
            {"seed", seed ? json(*seed) : json(nullptr)},
            {"source", source}};
}

int run_cli(const std::vector<std::string> &args, std::ostream &out,
            std::ostream &err) {
    CLI::App app{"Bell-inequality simulation and verification toolkit",
                 "bellsim"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "bellsim 0.1.0");

    const std::string seed_help =
        std::string{"RNG seed (default: $"} + kSeedEnv + " or 1)";

    ChshSimConfig chsh;
    auto *chsh_cmd =
        app.add_subcommand("chsh-sim", "Simulate a four-setting CHSH run");
    auto *state_opt = chsh_cmd->add_option("--state", chsh.state,
                                           "Quantum state, e.g. "
                                           "spin-anticorrelated");
    auto *model_opt =
        chsh_cmd->add_option("--model", chsh.model, "Built-in LHV model");
    state_opt->excludes(model_opt);
    chsh_cmd->add_option("--angles", chsh.angles,
                         "delta,delta',gamma,gamma' in degrees")
        ->delimiter(',')
        ->capture_default_str();
    chsh_cmd->add_option("--trials", chsh.trials, "Number of trials")
        ->capture_default_str();
    chsh_cmd->add_option("--seed", chsh.seed, seed_help);
    chsh_cmd->add_option("--policy", chsh.policy, "Settings choice")
        ->check(CLI::IsMember({"random", "round-robin"}))
        ->capture_default_str();
    chsh_cmd->add_option("--workers", chsh.workers, "Worker threads")
        ->check(CLI::Range(1u, 1024u))
        ->capture_default_str();
    chsh_cmd->add_option("--emit-trials", chsh.emit_trials,
                         "Write the trial log as CSV");
    chsh_cmd->add_option("--report", chsh.report,
                         "Write the report JSON ('-' for stdout)");

    AnalyzeConfig analyze;
    auto *analyze_cmd =
        app.add_subcommand("analyze", "Analyze a trial CSV into a CHSH report");
    analyze_cmd->add_option("input", analyze.input, "Trial CSV path")
        ->required();
    analyze_cmd->add_option("--report", analyze.report,
                            "Write the report JSON ('-' for stdout)");

    WignerScanConfig wigner;
    auto *wigner_cmd = app.add_subcommand(
        "wigner-scan", "Scan Wigner's inequality for the spin singlet");
    wigner_cmd->add_option("--theta1", wigner.theta1, "Degrees")
        ->capture_default_str();
    wigner_cmd->add_option("--theta3", wigner.theta3, "Degrees")
        ->capture_default_str();
    wigner_cmd->add_option("--steps", wigner.steps, "Grid points for theta2")
        ->capture_default_str();
    wigner_cmd->add_option("--output", wigner.output, "CSV path ('-' stdout)")
        ->capture_default_str();

    EnumerateConfig enumerate;
    auto *enum_cmd = app.add_subcommand(
        "enumerate", "Print the 16 quartets (or the 8 sextets)");
    enum_cmd->add_option("--format", enumerate.format)
        ->check(CLI::IsMember({"text", "csv", "json"}))
        ->capture_default_str();
    enum_cmd->add_flag("--sextets", enumerate.sextets,
                       "Print the sextets instead of the quartets");
    enum_cmd->add_option("--sign", enumerate.sign)
        ->check(CLI::IsMember({"anticorrelated", "correlated"}))
        ->capture_default_str();

    LhvSimConfig lhv;
    auto *lhv_cmd = app.add_subcommand(
        "lhv-sim", "Evaluate an LHV model by quadrature and Monte Carlo");
    lhv_cmd->add_option("--model", lhv.model)->capture_default_str();
    lhv_cmd->add_option("--angles", lhv.angles,
                        "delta,delta',gamma,gamma' in degrees")
        ->delimiter(',')
        ->capture_default_str();
    lhv_cmd->add_option("--nodes", lhv.nodes, "Quadrature nodes")
        ->capture_default_str();
    lhv_cmd->add_option("--trials", lhv.trials, "Monte Carlo draws per pair")
        ->capture_default_str();
    lhv_cmd->add_option("--seed", lhv.seed, seed_help);
    lhv_cmd->add_option("--workers", lhv.workers)
        ->check(CLI::Range(1u, 1024u))
        ->capture_default_str();
    lhv_cmd->add_option("--report", lhv.report,
                        "Write a JSON report ('-' for stdout)");

    MaximizeConfig maximize;
    auto *max_cmd = app.add_subcommand(
        "maximize", "Search analyzer angles maximizing |S|");
    max_cmd->add_option("--state", maximize.state)->capture_default_str();
    max_cmd->add_option("--coarse-step", maximize.coarse_step, "Degrees")
        ->capture_default_str();
    max_cmd->add_option("--refine-iters", maximize.refine_iters)
        ->capture_default_str();
    max_cmd->add_flag("--equal-angles", maximize.equal_angles,
                      "Tie all four angles together");
    max_cmd->add_option("--format", maximize.format)
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();

    std::vector<const char *> argv;
    argv.reserve(args.size());
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (chsh_cmd->parsed()) {
            return cmd_chsh_sim(chsh, out);
        }
        if (analyze_cmd->parsed()) {
            return cmd_analyze(analyze, out);
        }
        if (wigner_cmd->parsed()) {
            return cmd_wigner_scan(wigner, out);
        }
        if (enum_cmd->parsed()) {
            return cmd_enumerate(enumerate, out);
        }
        if (lhv_cmd->parsed()) {
            return cmd_lhv_sim(lhv, out);
        }
        if (max_cmd->parsed()) {
            return cmd_maximize(maximize, out);
        }
    } catch (const UsageError &e) {
        err << e.what() << '\n';
        return kExitUsage;
    } catch (const TrialCsvError &e) {
        err << e.what() << '\n';
        return kExitUsage;
    } catch (const MissingSettingsPair &e) {
        err << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument &e) {
        err << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}

} // namespace bellsim::cli
