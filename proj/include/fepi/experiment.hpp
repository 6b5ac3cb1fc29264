#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fepi/common.hpp"
#include "fepi/csv.hpp"
#include "fepi/excitation.hpp"
#include "fepi/sim_config.hpp"
#include "fepi/simulate.hpp"
#include "fepi/verdicts.hpp"

namespace fepi {

// ---------------------------------------------------------------------------
// Experiment configuration file
// ---------------------------------------------------------------------------

struct RegressorSpec {
    double amplitude = 1.0;
    double rate = 1.0;
    double noise_scale = 1.0; // multiplier on the shared output-noise sequence
};

/// One experiment: the method parameters, the true-parameter schedule, the
/// regressor family, optional measurement noise and an optional list of
/// expected per-interval verdicts.
struct ExperimentConfig {
    std::string name;

    double dt = 1e-4;
    double t_end = 0.0;
    double t_e = -1.0; // < 0: defaults to t_end

    double eta_min = -1.0;
    double T = 0.0;
    double T_plus = 0.0;
    double sigma = -1.0; // < 0: defaults to 5 / (2 T)
    double gamma = 0.0;
    Vec theta_hat0;

    ParameterSchedule schedule;
    std::vector<RegressorSpec> regressors;
    std::optional<NoiseSpec> regressor_noise;
    std::optional<NoiseSpec> output_noise;
    std::vector<TableRow> expected;

    bool noisy() const { return regressor_noise.has_value() || output_noise.has_value(); }

    double effective_t_e() const { return t_e < 0.0 ? t_end : t_e; }
    double effective_sigma() const { return sigma < 0.0 ? 5.0 / (2.0 * T) : sigma; }

    SimConfig sim_config(std::size_t regressor_idx) const {
        const auto& reg = regressors.at(regressor_idx);
        SimConfig c;
        c.dt = dt;
        c.t_end = t_end;
        c.t_e = effective_t_e();
        c.T = T;
        c.T_plus = T_plus;
        c.sigma = effective_sigma();
        c.gamma = gamma;
        c.eta_min = eta_min;
        c.theta_hat0 = theta_hat0;
        c.input = ExponentialInput{reg.amplitude, reg.rate};
        c.regressor_noise = regressor_noise;
        if (output_noise) {
            NoiseSpec out = *output_noise;
            out.scale *= reg.noise_scale;
            c.output_noise = out;
        }
        return c;
    }

    void validate() const {
        if (regressors.empty()) throw ConfigError(name + ": at least one regressor is required");
        for (std::size_t i = 0; i < regressors.size(); ++i)
            sim_config(i).validate_with(schedule);
        for (const auto& row : expected)
            if (!(row.t1 > row.t0)) throw ConfigError(name + ": expect rows must have t1 > t0");
    }
};

namespace detail {

struct ConfigLine {
    std::string key;
    std::string value; // empty for block open/close
    enum class Kind { key_value, block_open, block_close } kind;
    int number = 0;
};

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

inline double parse_number(const std::string& s, const std::string& where) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected a number, got '" + s + "'");
    }
}

inline std::vector<std::string> split_list(const std::string& s, const std::string& where) {
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw ConfigError(where + ": expected a [..] list, got '" + s + "'");
    std::vector<std::string> items;
    std::string body = s.substr(1, s.size() - 2);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::string v = trim(item);
        if (!v.empty()) items.push_back(v);
    }
    return items;
}

inline Vec parse_vector(const std::string& s, const std::string& where) {
    Vec out;
    for (const auto& item : split_list(s, where)) out.push_back(parse_number(item, where));
    return out;
}

} // namespace detail

/// Parses the plain block-structured config format. Every diagnostic carries
/// file:line.
inline ExperimentConfig parse_experiment_text(std::string_view text, const std::string& filename) {
    ExperimentConfig cfg;
    cfg.name = std::filesystem::path(filename).stem().string();

    std::vector<std::string> stack;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;

    auto where = [&](int n) { return filename + ":" + std::to_string(n); };
    auto path = [&]() {
        std::string p;
        for (const auto& s : stack) p += (p.empty() ? "" : ".") + s;
        return p;
    };

    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        std::string line = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;

        if (line == "}") {
            if (stack.empty()) throw ConfigError(where(line_no) + ": unmatched '}'");
            stack.pop_back();
            continue;
        }
        if (line.size() > 1 && line.back() == '{') {
            const std::string block = detail::trim(line.substr(0, line.size() - 1));
            const std::string parent = stack.empty() ? "" : stack.back();
            if (parent.empty()) {
                if (block != "simulation" && block != "method" && block != "schedule" &&
                    block != "regressor" && block != "noise" && block != "expect")
                    throw ConfigError(where(line_no) + ": unknown block '" + block + "'");
                if (block == "regressor") cfg.regressors.emplace_back();
            } else if (parent == "noise") {
                if (block == "regressor")
                    cfg.regressor_noise.emplace();
                else if (block == "output")
                    cfg.output_noise.emplace();
                else
                    throw ConfigError(where(line_no) + ": unknown noise block '" + block + "'");
            } else {
                throw ConfigError(where(line_no) + ": block '" + block + "' cannot nest under '" +
                                  parent + "'");
            }
            stack.push_back(block);
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where(line_no) + ": expected 'key = value', got '" + line + "'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        const std::string loc = where(line_no);

        const std::string scope = path();
        if (scope == "simulation") {
            if (key == "dt")
                cfg.dt = detail::parse_number(value, loc);
            else if (key == "t_end")
                cfg.t_end = detail::parse_number(value, loc);
            else if (key == "t_e")
                cfg.t_e = detail::parse_number(value, loc);
            else
                throw ConfigError(loc + ": unknown key '" + key + "' in simulation block");
        } else if (scope == "method") {
            if (key == "eta_min")
                cfg.eta_min = detail::parse_number(value, loc);
            else if (key == "T")
                cfg.T = detail::parse_number(value, loc);
            else if (key == "T_plus")
                cfg.T_plus = detail::parse_number(value, loc);
            else if (key == "sigma")
                cfg.sigma = detail::parse_number(value, loc);
            else if (key == "gamma")
                cfg.gamma = detail::parse_number(value, loc);
            else if (key == "theta_hat0")
                cfg.theta_hat0 = detail::parse_vector(value, loc);
            else
                throw ConfigError(loc + ": unknown key '" + key + "' in method block");
        } else if (scope == "schedule") {
            if (key == "theta0")
                cfg.schedule.theta0 = detail::parse_vector(value, loc);
            else if (key == "jump") {
                const Vec v = detail::parse_vector(value, loc);
                if (v.size() < 2)
                    throw ConfigError(loc + ": jump needs [time, delta...]");
                ParameterSchedule::Jump j;
                j.time = v[0];
                j.delta.assign(v.begin() + 1, v.end());
                cfg.schedule.jumps.push_back(std::move(j));
            } else
                throw ConfigError(loc + ": unknown key '" + key + "' in schedule block");
        } else if (scope == "regressor") {
            auto& reg = cfg.regressors.back();
            if (key == "model") {
                if (value != "first_order")
                    throw ConfigError(loc + ": unsupported regressor model '" + value + "'");
            } else if (key == "amplitude")
                reg.amplitude = detail::parse_number(value, loc);
            else if (key == "rate")
                reg.rate = detail::parse_number(value, loc);
            else if (key == "noise_scale")
                reg.noise_scale = detail::parse_number(value, loc);
            else
                throw ConfigError(loc + ": unknown key '" + key + "' in regressor block");
        } else if (scope == "noise.regressor" || scope == "noise.output") {
            NoiseSpec& ns =
                scope == "noise.regressor" ? *cfg.regressor_noise : *cfg.output_noise;
            if (key == "power")
                ns.power = detail::parse_number(value, loc);
            else if (key == "sample_time")
                ns.sample_time = detail::parse_number(value, loc);
            else if (key == "seed")
                ns.seed = static_cast<std::uint64_t>(detail::parse_number(value, loc));
            else
                throw ConfigError(loc + ": unknown key '" + key + "' in " + scope + " block");
        } else if (scope == "expect") {
            if (key != "row") throw ConfigError(loc + ": unknown key '" + key + "' in expect block");
            const auto items = detail::split_list(value, loc);
            if (items.size() != 3)
                throw ConfigError(loc + ": expect row needs [t0, t1, class]");
            TableRow row;
            row.t0 = detail::parse_number(items[0], loc);
            row.t1 = detail::parse_number(items[1], loc);
            const auto cls = boundedness_class_from_string(items[2]);
            if (!cls) throw ConfigError(loc + ": unknown boundedness class '" + items[2] + "'");
            row.expected = *cls;
            cfg.expected.push_back(row);
        } else {
            throw ConfigError(loc + ": key '" + key + "' outside of any block");
        }
    }
    if (!stack.empty())
        throw ConfigError(filename + ": unterminated block '" + stack.back() + "'");
    cfg.validate();
    return cfg;
}

inline ExperimentConfig parse_experiment_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_experiment_text(ss.str(), path);
}

// ---------------------------------------------------------------------------
// Runners
// ---------------------------------------------------------------------------

struct RunOverrides {
    std::optional<double> dt;
    std::optional<std::uint64_t> seed;
};

inline ExperimentConfig apply_overrides(ExperimentConfig cfg, const RunOverrides& ov) {
    if (ov.dt) cfg.dt = *ov.dt;
    if (ov.seed) {
        if (cfg.regressor_noise) cfg.regressor_noise->seed = *ov.seed;
        if (cfg.output_noise) cfg.output_noise->seed = *ov.seed + 1;
    }
    cfg.validate();
    return cfg;
}

struct ExperimentRun {
    ExperimentConfig cfg;
    std::vector<Trajectory> trajectories;
};

inline ExperimentRun run_experiment(const ExperimentConfig& cfg0, const RunOverrides& ov = {}) {
    ExperimentRun run;
    run.cfg = apply_overrides(cfg0, ov);
    for (std::size_t i = 0; i < run.cfg.regressors.size(); ++i)
        run.trajectories.push_back(integrate_system(run.cfg.sim_config(i), run.cfg.schedule));
    return run;
}

namespace detail {

inline std::string fmt(double v, const char* spec = "%.6g") {
    char buf[48];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

inline std::string fmt_opt(const std::optional<double>& v, const char* spec = "%.6g") {
    return v ? fmt(*v, spec) : std::string("n/a");
}

} // namespace detail

// ---------------------------------------------------------------------------
// analyze: excitation report as structured text
// ---------------------------------------------------------------------------

struct AnalyzeOutput {
    ExcitationReport report;
    std::string text;
};

inline AnalyzeOutput analyze_experiment(const ExperimentRun& run) {
    AnalyzeOutput out;
    const SimConfig base = run.cfg.sim_config(0);
    out.report = excitation_report(base, run.cfg.schedule, run.trajectories);

    using detail::fmt;
    using detail::fmt_opt;
    std::string& s = out.text;
    s += "excitation analysis: " + run.cfg.name + "\n";
    s += "  eta_min = " + fmt(run.cfg.eta_min) + ", T = " + fmt(run.cfg.T) +
         ", T_plus = " + fmt(run.cfg.T_plus) + ", sigma = " + fmt(base.sigma) +
         ", t_e = " + fmt(base.t_e) + "\n";
    for (std::size_t j = 0; j < out.report.regressors.size(); ++j) {
        const auto& r = out.report.regressors[j];
        const auto& spec = run.cfg.regressors[j];
        s += "  regressor " + std::to_string(j + 1) + " (amplitude " + fmt(spec.amplitude) +
             ", rate " + fmt(spec.rate) + "):\n";
        if (!r.transitions.t_start) {
            s += "    never excited above floor\n";
            continue;
        }
        s += "    t_start = " + fmt_opt(r.transitions.t_start, "%.6f") + "\n";
        s += "    T_j     = " + fmt_opt(r.transitions.T_j, "%.6f") + "\n";
        s += "    alpha[T_plus, t_e]   = " + fmt(r.alpha_post) + "\n";
        s += "    min window alpha     = " + fmt(r.min_window_alpha) + "\n";
        s += "    single excursion     = " + std::string(r.single_excursion ? "yes" : "no") + "\n";
    }
    const auto& a = out.report.assumptions;
    s += "  assumption 1 (floor-crossing structure): " + std::string(a.assumption1 ? "ok" : "VIOLATED") +
         "  [met from t = " + fmt(a.met_from, "%.6f") + "]\n";
    s += "  assumption 2 (window excitation):        " + std::string(a.assumption2 ? "ok" : "VIOLATED") + "\n";
    s += "  assumption 3 (T_plus <= min T_j):        " + std::string(a.assumption3 ? "ok" : "VIOLATED") +
         "  [min T_j = " + fmt(a.min_T_j, "%.6f") + "]\n";
    const auto& b = out.report.bounds;
    s += "  bounds:\n";
    s += "    Omega_UB     = " + fmt(b.Omega_UB) + "\n";
    s += "    Delta_2      = " + fmt(b.Delta_2) + "\n";
    s += "    Omega_LB     = " + fmt(b.Omega_LB) + "\n";
    s += "    alpha_min    = " + fmt(b.alpha_min) + "\n";
    s += "    Omega_bar_LB = " + fmt(b.Omega_bar_LB) + "\n";
    s += "    degenerate   = " + std::string(b.degenerate ? "yes (" + b.note + ")" : "no") + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// verify: interval verdicts, envelope checks, prediction comparison
// ---------------------------------------------------------------------------

struct EnvelopeOutcome {
    std::string name;
    double t0 = 0.0;
    EnvelopeResult result;
};

struct RegressorVerdicts {
    std::vector<BoundednessVerdict> rows;
    std::vector<EnvelopeOutcome> envelopes;
    std::optional<TableComparison> comparison;
};

struct VerifyOutput {
    std::vector<RegressorVerdicts> regressors;
    bool ok = true;
    std::string text;
    std::string csv; // machine-readable verdict rows
};

/// Interval boundaries when the config carries no expectation table: the
/// union of jump times and window boundaries, plus t_e and t_end.
inline std::vector<std::pair<double, double>> default_intervals(const ExperimentConfig& cfg) {
    std::vector<double> b{0.0, cfg.T_plus, cfg.effective_t_e(), cfg.t_end};
    for (std::size_t k = 1; static_cast<double>(k) * cfg.T < cfg.T_plus - 1e-9; ++k)
        b.push_back(static_cast<double>(k) * cfg.T);
    for (const auto& j : cfg.schedule.jumps) b.push_back(j.time);
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end(),
                        [](double x, double y) { return std::abs(x - y) < 1e-9; }),
            b.end());
    std::vector<std::pair<double, double>> intervals;
    for (std::size_t i = 0; i + 1 < b.size(); ++i) intervals.emplace_back(b[i], b[i + 1]);
    return intervals;
}

inline VerifyOutput verify_experiment(const ExperimentRun& run, const ExcitationReport& report) {
    VerifyOutput out;
    const auto& cfg = run.cfg;
    const SimConfig base = cfg.sim_config(0);

    std::vector<std::pair<double, double>> intervals;
    if (!cfg.expected.empty())
        for (const auto& row : cfg.expected) intervals.emplace_back(row.t0, row.t1);
    else
        intervals = default_intervals(cfg);

    ClassifyThresholds th;
    th.scale = std::max(cfg.schedule.max_jump_norm(), 1e-30);

    using detail::fmt;
    std::string& s = out.text;
    s += "verdict report: " + cfg.name + "\n";
    out.csv = "regressor,t0,t1,class,kappa,rho,R,expected,match\n";

    for (std::size_t j = 0; j < run.trajectories.size(); ++j) {
        const auto& traj = run.trajectories[j];
        const auto& exc = report.regressors[j];
        RegressorVerdicts rv;

        for (const auto& [t0, t1] : intervals) {
            const bool terminal = std::abs(t1 - cfg.t_end) < 1e-9;
            rv.rows.push_back(classify_interval(traj.err_norm, traj.dt, t0, t1, th, terminal));
        }
        if (!cfg.expected.empty()) rv.comparison = table_report(rv.rows, cfg.expected);

        // Envelope checks are meaningful only for exact (noise-free)
        // regressions; perturbed runs get verdicts but no envelope claims.
        if (!cfg.noisy()) {
            for (const auto& w : exc.windows) {
                if (!w.T0k) continue;
                EnvelopeSpec spec;
                spec.gamma = cfg.gamma;
                const std::size_t anchor_idx = grid_index(*w.T0k, traj.dt);
                spec.level = traj.Omega[anchor_idx];
                spec.t_anchor = *w.T0k;
                spec.err_anchor = traj.err_norm[anchor_idx];
                if (w.jump_times.empty()) {
                    spec.name = "window-exp";
                    spec.residual = 0.0;
                } else {
                    spec.name = "window-residual";
                    double omega1_ub = 0.0, theta1 = 0.0;
                    for (const auto& jb : exc.jump_bounds) {
                        if (jb.time >= w.t0 && jb.time < w.t1) {
                            omega1_ub = std::max(omega1_ub, jb.Omega_at);
                            theta1 += jb.delta_norm;
                        }
                    }
                    spec.residual = cfg.T * omega1_ub / (spec.level * spec.level) * theta1;
                }
                const std::size_t win_end = grid_index(w.t1, traj.dt);
                const auto prefix = std::span<const double>(traj.err_norm).subspan(0, win_end);
                EnvelopeOutcome eo{spec.name, *w.T0k, envelope_check(prefix, traj.dt, spec)};
                rv.envelopes.push_back(std::move(eo));
            }
            if (!report.bounds.degenerate) {
                EnvelopeSpec spec;
                spec.gamma = cfg.gamma;
                spec.level = report.bounds.Omega_bar_LB;
                spec.t_anchor = base.t_e;
                spec.err_anchor = traj.err_norm[grid_index(base.t_e, traj.dt)];
                double omega1_ub = 0.0, theta1 = 0.0;
                for (const auto& jb : exc.jump_bounds) {
                    if (jb.time >= cfg.T_plus && jb.time < base.t_e) {
                        omega1_ub = std::max(omega1_ub, jb.Omega_at);
                        theta1 += jb.delta_norm;
                    }
                }
                if (theta1 > 0.0) {
                    spec.name = "terminal-residual";
                    spec.residual = report.bounds.Omega_UB * omega1_ub /
                                    (spec.level * spec.level) * theta1;
                } else {
                    spec.name = "terminal-exp";
                    spec.residual = 0.0;
                }
                EnvelopeOutcome eo{spec.name, base.t_e,
                                   envelope_check(traj.err_norm, traj.dt, spec)};
                rv.envelopes.push_back(std::move(eo));
            }
        }

        // Report text and csv rows.
        s += "  regressor " + std::to_string(j + 1) + ":\n";
        for (std::size_t r = 0; r < rv.rows.size(); ++r) {
            const auto& v = rv.rows[r];
            s += "    [" + fmt(v.t0, "%.4g") + ", " + fmt(v.t1, "%.4g") + "]  " +
                 to_string(v.cls) + "  kappa=" + fmt(v.kappa, "%.5g") +
                 " rho=" + fmt(v.rho, "%.3g") + " R=" + fmt(v.R, "%.3g");
            std::string expected = "-";
            std::string match = "-";
            if (rv.comparison) {
                expected = to_string(rv.comparison->rows[r].expected.expected);
                match = rv.comparison->rows[r].match ? "match" : "MISMATCH";
                s += "  expected " + expected + " -> " + match;
            }
            s += "\n";
            out.csv += std::to_string(j + 1) + "," + fmt(v.t0, "%.10g") + "," +
                       fmt(v.t1, "%.10g") + "," + to_string(v.cls) + "," + fmt(v.kappa, "%.10g") +
                       "," + fmt(v.rho, "%.10g") + "," + fmt(v.R, "%.10g") + "," + expected + "," +
                       match + "\n";
        }
        for (const auto& eo : rv.envelopes) {
            s += "    envelope " + eo.name + " from t = " + fmt(eo.t0, "%.4g") + ": " +
                 (eo.result.pass ? "pass" : "FAIL") +
                 (eo.result.first_violation_time
                      ? " (first violation at t = " + fmt(*eo.result.first_violation_time, "%.6g") +
                            ")"
                      : "") +
                 "  [max err/bound " + fmt(eo.result.max_excess, "%.3g") + ", strong exponent " +
                 (eo.result.strong_exponent_pass ? "holds" : "exceeded") + "]\n";
        }

        for (const auto& v : rv.rows)
            if (v.cls == BoundednessClass::Unbounded) out.ok = false;
        for (const auto& eo : rv.envelopes)
            if (!eo.result.pass) out.ok = false;
        if (rv.comparison && !rv.comparison->all_match) out.ok = false;

        out.regressors.push_back(std::move(rv));
    }

    if (!cfg.expected.empty()) {
        std::size_t total = 0, matched = 0;
        for (const auto& rv : out.regressors) {
            total += rv.comparison->rows.size();
            matched += rv.comparison->matches;
        }
        s += "  prediction table: " + std::to_string(matched) + "/" + std::to_string(total) +
             " rows match\n";
    }
    s += std::string("  result: ") + (out.ok ? "ok" : "FAILED") + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// reproduce: preloaded experiments end to end
// ---------------------------------------------------------------------------

/// Resolution order for the directory holding the preloaded experiment
/// configs: explicit argument, FEPI_CONFIGS environment variable, ./configs,
/// finally the source-tree path baked in at build time.
inline std::string resolve_config_dir(const std::string& explicit_dir) {
    namespace fs = std::filesystem;
    if (!explicit_dir.empty()) return explicit_dir;
    if (const char* env = std::getenv("FEPI_CONFIGS"); env && *env) return env;
    if (fs::exists("configs")) return "configs";
#ifdef FEPI_SOURCE_CONFIG_DIR
    return FEPI_SOURCE_CONFIG_DIR;
#else
    return "configs";
#endif
}

struct ReproduceResult {
    int exit_code = 0;
    std::string summary;
};

inline ReproduceResult run_reproduce(const std::string& experiment, const std::string& out_dir,
                                     const std::string& config_dir = "",
                                     const RunOverrides& ov = {}) {
    namespace fs = std::filesystem;
    const std::string dir = resolve_config_dir(config_dir);
    const std::string cfg_path = dir + "/" + experiment + ".cfg";
    if (!fs::exists(cfg_path))
        throw ConfigError("unknown experiment '" + experiment + "' (no " + cfg_path + ")");

    const auto cfg = parse_experiment_file(cfg_path);
    const auto run = run_experiment(cfg, ov);
    fs::create_directories(out_dir);

    for (std::size_t j = 0; j < run.trajectories.size(); ++j)
        write_trajectory_csv(run.trajectories[j], out_dir + "/" + cfg.name + "_regressor_" +
                                                      std::to_string(j + 1) + ".csv");

    const auto analysis = analyze_experiment(run);
    {
        std::ofstream f(out_dir + "/" + cfg.name + "_analysis.txt");
        f << analysis.text;
    }

    const auto verify = verify_experiment(run, analysis.report);
    {
        std::ofstream f(out_dir + "/" + cfg.name + "_verdicts.txt");
        f << verify.text;
        std::ofstream c(out_dir + "/" + cfg.name + "_verdicts.csv");
        c << verify.csv;
    }

    ReproduceResult res;
    res.exit_code = verify.ok ? 0 : 1;
    res.summary = analysis.text + verify.text;
    return res;
}

} // namespace fepi
