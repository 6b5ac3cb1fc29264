// Acceptance suite: runs the four preloaded experiments and checks the ten
// acceptance criteria end to end, printing one pass/fail line per criterion.
// Requires FEPI_CONFIGS (directory with the experiment configs); FEPI_CLI
// (path to the command-line binary) enables the process-level checks.

#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "fepi/experiment.hpp"

using namespace fepi;

namespace {

std::string config_dir() {
    if (const char* env = std::getenv("FEPI_CONFIGS"); env && *env) return env;
    return "configs";
}

std::filesystem::path scratch_dir() {
    static const auto dir =
        std::filesystem::temp_directory_path() / "fepi_acceptance";
    std::filesystem::create_directories(dir);
    return dir;
}

struct Experiment {
    ExperimentConfig cfg;
    ExperimentRun run;
    AnalyzeOutput analysis;
    VerifyOutput verify;
};

Experiment load(const std::string& name) {
    Experiment e;
    e.cfg = parse_experiment_file(config_dir() + "/" + name + ".cfg");
    e.run = run_experiment(e.cfg);
    e.analysis = analyze_experiment(e.run);
    e.verify = verify_experiment(e.run, e.analysis.report);
    return e;
}

const Experiment& exp_a() {
    static const Experiment e = load("exp-a");
    return e;
}
const Experiment& exp_a_fast() {
    static const Experiment e = load("exp-a-fast");
    return e;
}
const Experiment& exp_b() {
    static const Experiment e = load("exp-b");
    return e;
}
const Experiment& exp_noise() {
    static const Experiment e = load("exp-noise");
    return e;
}

void report(int n, const char* what, bool pass, const std::string& detail = "") {
    std::printf("[%s] criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", n, what,
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
}

bool within(double value, double target, double rel) {
    return std::abs(value - target) <= rel * std::abs(target);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const BoundednessVerdict* find_row(const RegressorVerdicts& rv, double t0, double t1) {
    for (const auto& v : rv.rows)
        if (std::abs(v.t0 - t0) < 1e-9 && std::abs(v.t1 - t1) < 1e-9) return &v;
    return nullptr;
}

int run_cli(const std::string& args, std::string* output = nullptr) {
    const char* cli = std::getenv("FEPI_CLI");
    if (!cli || !*cli) return -1;
    const auto log = scratch_dir() / "cli_output.txt";
    const std::string cmd = std::string(cli) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    if (output) {
        std::ifstream f(log);
        std::stringstream ss;
        ss << f.rdbuf();
        *output = ss.str();
    }
    if (status < 0) return status;
    return (status & 0x7f) ? 128 : (status >> 8);
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("criterion 1: transition times of the fast-decay family") {
    const auto t0 = std::chrono::steady_clock::now();
    const auto cfg = parse_experiment_file(config_dir() + "/exp-b.cfg");
    const auto run = run_experiment(cfg);
    const auto analysis = analyze_experiment(run);
    const double elapsed = seconds_since(t0);

    const double expected[] = {0.88, 3.21, 5.52};
    bool pass = elapsed < 1.0;
    std::string detail = "T_j =";
    for (std::size_t j = 0; j < 3; ++j) {
        const auto& tj = analysis.report.regressors[j].transitions.T_j;
        pass = pass && tj.has_value() && within(*tj, expected[j], 0.01);
        detail += " " + detail::fmt(tj.value_or(-1.0), "%.4f");
    }
    detail += " (targets 0.88 3.21 5.52, +/-1%), runtime " + detail::fmt(elapsed, "%.2f") + " s";
    report(1, "fast-decay transition times", pass, detail);
    REQUIRE(pass);
}

TEST_CASE("criterion 2: transition times and onset of the slow-decay family") {
    const auto& e = exp_a();
    const auto& regs = e.analysis.report.regressors;

    const auto t1 = regs[0].transitions.T_j;
    const auto t2 = regs[1].transitions.T_j;
    const auto t3 = regs[2].transitions.T_j;
    const auto onset = regs[0].transitions.t_start;

    bool pass = t1 && t2 && t3 && onset;
    pass = pass && within(*t1, 3.5, 0.03);
    pass = pass && within(*t2, 6.47, 0.01);
    pass = pass && within(*t3, 9.1, 0.01);
    pass = pass && within(*onset, 0.112, 0.02);

    std::string detail = "T_j = " + detail::fmt(t1.value_or(-1), "%.4f") + " " +
                         detail::fmt(t2.value_or(-1), "%.4f") + " " +
                         detail::fmt(t3.value_or(-1), "%.4f") +
                         ", onset = " + detail::fmt(onset.value_or(-1), "%.4f");
    if (t1) {
        const double dev = (*t1 - 3.47) / 3.47 * 100.0;
        detail += "; T_1 deviates from the reported 3.47 by " + detail::fmt(dev, "%+.1f") + "%";
    }
    report(2, "slow-decay transition times and onset", pass, detail);
    REQUIRE(pass);
}

TEST_CASE("criterion 3: prediction table reproduction") {
    const auto t0 = std::chrono::steady_clock::now();
    const auto out = (scratch_dir() / "exp-a").string();
    const auto res = run_reproduce("exp-a", out, config_dir());
    const double elapsed = seconds_since(t0);

    bool pass = res.exit_code == 0 && elapsed < 5.0;
    std::size_t matched = 0, total = 0;
    for (const auto& rv : exp_a().verify.regressors) {
        REQUIRE(rv.comparison.has_value());
        matched += rv.comparison->matches;
        total += rv.comparison->rows.size();
    }
    pass = pass && matched == total && total == 36; // 12 rows x 3 regressors

    for (int j = 1; j <= 3; ++j)
        pass = pass && std::filesystem::exists(out + "/exp-a_regressor_" + std::to_string(j) +
                                               ".csv");

    report(3, "prediction table reproduction",
           pass,
           std::to_string(matched) + "/" + std::to_string(total) + " rows match, runtime " +
               detail::fmt(elapsed, "%.2f") + " s");
    REQUIRE(pass);
}

TEST_CASE("criterion 4: narrower windows yield more exponentially bounded intervals") {
    auto count_ieb = [](const VerifyOutput& v, double t_max) {
        std::vector<std::size_t> counts;
        for (const auto& rv : v.regressors) {
            std::size_t c = 0;
            for (const auto& row : rv.rows)
                if (row.cls == BoundednessClass::IEB && row.t1 <= t_max + 1e-9) ++c;
            counts.push_back(c);
        }
        return counts;
    };
    const auto slow = count_ieb(exp_a().verify, 3.0);
    const auto fast = count_ieb(exp_a_fast().verify, 3.0);
    bool pass = true;
    for (std::size_t j = 0; j < 3; ++j) pass = pass && fast[j] > slow[j];
    report(4, "window-shrink property", pass,
           "IEB intervals per regressor: T=0.5 -> " + std::to_string(slow[0]) +
               ", T=0.05 -> " + std::to_string(fast[0]));
    REQUIRE(pass);
}

TEST_CASE("criterion 5: terminal convergence and the terminal envelope") {
    const auto& e = exp_a();
    bool pass = true;
    std::string detail;
    for (std::size_t j = 0; j < 3; ++j) {
        const auto& traj = e.run.trajectories[j];
        const auto i3 = grid_index(3.0, traj.dt);
        const auto i5 = grid_index(5.0, traj.dt);
        // Nonincreasing after T+; 1e-12 absolute slack covers rounding jitter
        // once the error sits at the arithmetic floor.
        for (std::size_t i = i3 + 1; i < traj.samples(); ++i) {
            if (traj.err_norm[i] > traj.err_norm[i - 1] + 1e-12) {
                pass = false;
                detail = "error grows at t = " + detail::fmt(traj.t[i], "%.4f");
                break;
            }
        }
        pass = pass && traj.err_norm[i5] <= 1e-6;

        bool c2_pass = false, c2_found = false;
        for (const auto& eo : e.verify.regressors[j].envelopes) {
            if (eo.name == "terminal-exp") {
                c2_found = true;
                c2_pass = eo.result.pass;
            }
        }
        pass = pass && c2_found && c2_pass;
        if (j == 0)
            detail = "err(5) = " + detail::fmt(e.run.trajectories[0].err_norm[i5], "%.3g") +
                     ", terminal envelope " + (c2_pass ? "holds" : "violated");
    }
    report(5, "terminal convergence", pass, detail);
    REQUIRE(pass);
}

TEST_CASE("criterion 6: shared decay rate under normalization") {
    const auto& a = exp_a();
    double kmin = std::numeric_limits<double>::infinity(), kmax = 0.0;
    bool pass = true;
    std::string detail = "kappa on [0.5, 1]:";
    for (const auto& rv : a.verify.regressors) {
        const auto* row = find_row(rv, 0.5, 1.0);
        pass = pass && row != nullptr && row->cls == BoundednessClass::IEB;
        if (row) {
            kmin = std::min(kmin, row->kappa);
            kmax = std::max(kmax, row->kappa);
            detail += " " + detail::fmt(row->kappa, "%.4g");
        }
    }
    pass = pass && kmax <= 1.05 * kmin;
    detail += " (spread " + detail::fmt((kmax / kmin - 1.0) * 100.0, "%.2f") + "%)";

    // Without the window-stop assumption the rates are individual per
    // regressor; visible once the smallest regressor has fallen below the
    // floor. Reported for reference, nothing asserted.
    detail += "; fast-decay family on [1.5, 2]:";
    for (const auto& rv : exp_b().verify.regressors) {
        const auto* row = find_row(rv, 1.5, 2.0);
        detail += " " + (row ? detail::fmt(row->kappa, "%.4g") : std::string("n/a"));
    }
    report(6, "scale-uniform decay rate", pass, detail);
    REQUIRE(pass);
}

TEST_CASE("criterion 7: stepped filter against trapezoid quadrature") {
    // Independent oracle: trapezoid quadrature of the window integrals on a
    // ten-times-refined grid, built from the closed-form regressor of the
    // exponential-input model (omega = a t exp(-t)), a locally reimplemented
    // normalization rule and the schedule's parameter values. Resets zero the
    // accumulators at the same event times. The refinement keeps the oracle's
    // own discretization error well below the comparison tolerance even on
    // the steep saturation ramp of the largest regressor.
    const auto& e = exp_a();
    const SimConfig base = e.cfg.sim_config(0);
    const int refine = 10;
    const double hs = base.dt / refine;
    bool pass = true;
    double worst = 0.0;
    for (std::size_t j = 0; j < e.run.trajectories.size(); ++j) {
        const auto& traj = e.run.trajectories[j];
        const auto& reg = e.cfg.regressors[j];
        REQUIRE(reg.rate == 1.0); // closed form below assumes u = a exp(-t)
        auto omega_exact = [&](double tau) { return reg.amplitude * tau * std::exp(-tau); };
        auto phi_exact = [&](double tau) {
            const double mag = std::abs(omega_exact(tau));
            if (mag == 0.0) return 0.0;
            return std::min(mag * 10.0, 1.0); // eta_min = -1
        };
        const auto resets = detail::reset_indices(base);
        std::size_t next_reset = 0;
        double t_reset = 0.0;
        double acc_O = 0.0, acc_Y = 0.0;
        double diff_O = 0.0, sup_O = 0.0, diff_Y = 0.0, sup_Y = 0.0;
        for (std::size_t i = 0; i < traj.samples(); ++i) {
            if (next_reset < resets.size() && resets[next_reset] == i) {
                acc_O = 0.0;
                acc_Y = 0.0;
                t_reset = traj.t[i];
                ++next_reset;
            }
            diff_O = std::max(diff_O, std::abs(acc_O - traj.Omega[i]));
            sup_O = std::max(sup_O, std::abs(traj.Omega[i]));
            diff_Y = std::max(diff_Y, std::abs(acc_Y - traj.yf[0][i]));
            sup_Y = std::max(sup_Y, std::abs(traj.yf[0][i]));
            if (i + 1 == traj.samples()) break;
            // theta is constant inside the step (jumps land on grid points)
            const double th = e.cfg.schedule.eval(traj.t[i] + 0.5 * hs)[0];
            for (int s = 0; s < refine; ++s) {
                const double ta = traj.t[i] + s * hs;
                const double tb = ta + hs;
                const double wa = std::exp(-base.sigma * (ta - t_reset));
                const double wb = std::exp(-base.sigma * (tb - t_reset));
                const double pa = phi_exact(ta);
                const double pb = phi_exact(tb);
                const double inc = 0.5 * hs * (wa * pa * pa + wb * pb * pb);
                acc_O += inc;
                acc_Y += inc * th;
            }
        }
        worst = std::max({worst, diff_O / sup_O, diff_Y / sup_Y});
        pass = pass && diff_O / sup_O < 1e-6 && diff_Y / sup_Y < 1e-6;
    }
    report(7, "filter quadrature oracle", pass,
           "max relative deviation " + detail::fmt(worst, "%.3g"));
    REQUIRE(pass);
}

TEST_CASE("criterion 8: estimator closed form at every step split") {
    const double gamma = 1e6, Omega = 0.01, horizon = 0.05;
    const double expected = std::exp(-5.0);
    bool pass = true;
    double worst = 0.0;
    for (double h : {0.05, 0.01, 0.002, 1e-3, 2.5e-4, 1e-4}) {
        EstimatorState st{{1.0}};
        const Vec yf{0.0};
        const auto steps = static_cast<int>(std::llround(horizon / h));
        for (int i = 0; i < steps; ++i) estimator_step(st, Omega, yf, gamma, h);
        const double rel = std::abs(st.theta_hat[0] - expected) / expected;
        worst = std::max(worst, rel);
        pass = pass && rel <= 1e-9;
    }
    report(8, "estimator closed form", pass,
           "max relative error " + detail::fmt(worst, "%.3g") + " over six step sizes");
    REQUIRE(pass);
}

TEST_CASE("criterion 9: invariant suite over every experiment") {
    bool pass = true;
    std::string detail;
    for (const Experiment* e : {&exp_a(), &exp_a_fast(), &exp_b(), &exp_noise()}) {
        const SimConfig base = e->cfg.sim_config(0);
        const auto i_plus = grid_index(base.T_plus, base.dt);
        const double omega_cap = (1.0 / base.sigma) * (1.0 + 1e-12); // fp accumulation slack
        for (const auto& traj : e->run.trajectories) {
            for (std::size_t i = 0; i < traj.samples(); ++i) {
                if (!(traj.phi[i] >= 0.0 && traj.phi[i] <= 1.0)) {
                    pass = false;
                    detail = e->cfg.name + ": phi out of [0,1] at t = " +
                             detail::fmt(traj.t[i], "%.4f");
                }
                if (!(traj.Omega[i] >= 0.0)) {
                    pass = false;
                    detail = e->cfg.name + ": Omega < 0";
                }
                const double cap = (i < i_plus) ? base.T : omega_cap;
                if (!(traj.Omega[i] <= cap)) {
                    pass = false;
                    detail = e->cfg.name + ": Omega exceeds its regime bound at t = " +
                             detail::fmt(traj.t[i], "%.4f");
                }
            }
            // frozen estimate whenever Omega vanishes
            for (std::size_t i = 0; i + 1 < traj.samples(); ++i) {
                if (traj.Omega[i] == 0.0) {
                    for (std::size_t c = 0; c < traj.dim(); ++c) {
                        if (traj.theta_hat[c][i + 1] != traj.theta_hat[c][i]) {
                            pass = false;
                            detail = e->cfg.name + ": estimate moved while Omega = 0";
                        }
                    }
                }
            }
        }
    }
    report(9, "invariant suite", pass, pass ? "phi, Omega, and freeze invariants hold" : detail);
    REQUIRE(pass);
}

TEST_CASE("criterion 10: bounded identification under measurement noise") {
    const auto& e = exp_noise();
    bool pass = true;
    double worst = 0.0;
    for (const auto& traj : e.run.trajectories) {
        const auto i0 = grid_index(0.5, traj.dt);
        const auto i1 = grid_index(5.0, traj.dt);
        double sup = 0.0;
        for (std::size_t i = i0; i <= i1 && i < traj.samples(); ++i)
            sup = std::max(sup, traj.err_norm[i]);
        worst = std::max(worst, sup);
        pass = pass && sup <= 1.0;
    }
    for (const auto& rv : e.verify.regressors)
        for (const auto& row : rv.rows)
            pass = pass && row.cls != BoundednessClass::Unbounded;
    report(10, "noise robustness", pass,
           "sup error on [0.5, 5] = " + detail::fmt(worst, "%.3g") + ", no unbounded verdicts");
    REQUIRE(pass);
}

TEST_CASE("cli: simulate runs are byte-identical") {
    if (!std::getenv("FEPI_CLI")) {
        WARN("FEPI_CLI not set; skipping process-level checks");
        return;
    }
    const auto out1 = scratch_dir() / "sim1";
    const auto out2 = scratch_dir() / "sim2";
    const std::string cfg = config_dir() + "/exp-noise.cfg";
    REQUIRE(run_cli("simulate --config " + cfg + " --out " + out1.string()) == 0);
    REQUIRE(run_cli("simulate --config " + cfg + " --out " + out2.string()) == 0);
    for (int j = 1; j <= 3; ++j) {
        const std::string f = "exp-noise_regressor_" + std::to_string(j) + ".csv";
        const auto a = read_file(out1 / f);
        const auto b = read_file(out2 / f);
        REQUIRE(!a.empty());
        REQUIRE(a == b);
    }
}

TEST_CASE("cli: analyze reports the violated window-stop assumption") {
    if (!std::getenv("FEPI_CLI")) return;
    std::string output;
    const int code = run_cli("analyze --config " + config_dir() + "/exp-b.cfg", &output);
    CHECK(code == 0);
    CHECK(output.find("assumption 3") != std::string::npos);
    CHECK(output.find("VIOLATED") != std::string::npos);
}

TEST_CASE("cli: malformed config exits nonzero with a diagnostic") {
    if (!std::getenv("FEPI_CLI")) return;
    const auto bad = scratch_dir() / "bad.cfg";
    std::ofstream(bad) << "simulation {\n  dt = banana\n}\n";
    std::string output;
    const int code = run_cli("simulate --config " + bad.string(), &output);
    CHECK(code == 2);
    CHECK(output.find("bad.cfg:2") != std::string::npos);
}
