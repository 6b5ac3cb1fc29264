#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fepi/common.hpp"
#include "fepi/sim_config.hpp"
#include "fepi/simulate.hpp"
#include "fepi/trajectory.hpp"

namespace fepi {

// ---------------------------------------------------------------------------
// Excitation level
// ---------------------------------------------------------------------------

/// Trapezoid quadrature of the signal energy, integral of s(tau)^2 over
/// [t0, t1] on the sample grid. The interval must contain at least one step.
inline double excitation_level(std::span<const double> s, double dt, double t0, double t1) {
    const std::size_t i0 = grid_index(t0, dt);
    const std::size_t i1 = grid_index(t1, dt);
    if (i1 <= i0 || i1 >= s.size())
        throw ConfigError("excitation_level: empty or out-of-range interval");
    double acc = 0.0;
    for (std::size_t i = i0; i < i1; ++i)
        acc += 0.5 * dt * (s[i] * s[i] + s[i + 1] * s[i + 1]);
    return acc;
}

/// Cumulative trapezoid prefix of s^2: P[i] = integral over [0, t_i].
inline std::vector<double> energy_prefix(std::span<const double> s, double dt) {
    std::vector<double> p(s.size(), 0.0);
    for (std::size_t i = 0; i + 1 < s.size(); ++i)
        p[i + 1] = p[i] + 0.5 * dt * (s[i] * s[i] + s[i + 1] * s[i + 1]);
    return p;
}

// ---------------------------------------------------------------------------
// Floor-crossing times
// ---------------------------------------------------------------------------

/// First and last times at which the regressor's decimal exponent exceeds
/// eta_min (equivalently |omega| > 10^eta_min), with linear refinement
/// between the bracketing samples. Empty when the regressor never exceeds
/// the floor.
struct TransitionTimes {
    std::optional<double> t_start;
    std::optional<double> T_j;
};

inline TransitionTimes detect_transition_times(std::span<const double> omega, double dt,
                                               double eta_min) {
    const double thr = std::pow(10.0, eta_min);
    TransitionTimes out;
    std::size_t first = omega.size(), last = omega.size();
    for (std::size_t i = 0; i < omega.size(); ++i) {
        if (std::abs(omega[i]) > thr) {
            if (first == omega.size()) first = i;
            last = i;
        }
    }
    if (first == omega.size()) return out; // never excited above the floor

    // Linear refinement of the |omega| = thr crossing inside [i, i+1].
    auto refine = [&](std::size_t i) {
        const double a = std::abs(omega[i]);
        const double b = std::abs(omega[i + 1]);
        if (a == b) return static_cast<double>(i) * dt;
        return (static_cast<double>(i) + (thr - a) / (b - a)) * dt;
    };

    out.t_start = (first == 0) ? 0.0 : refine(first - 1);
    out.T_j = (last + 1 >= omega.size()) ? static_cast<double>(last) * dt : refine(last);
    return out;
}

// ---------------------------------------------------------------------------
// Per-regressor diagnostics
// ---------------------------------------------------------------------------

/// Per-window statistics of the filtered regressor before T+.
struct WindowStat {
    double t0 = 0.0;
    double t1 = 0.0;
    double level = 0.0;            // integral of phi^2 over the window
    double floor = 0.0;            // exp(-sigma T) * level, the guaranteed Omega floor
    std::optional<double> T0k;     // first grid time at which Omega reaches the floor
    double Omega_end = 0.0;        // Omega at the last sample before the closing reset
    std::vector<double> jump_times; // jumps inside this window
};

struct JumpBound {
    double time = 0.0;
    double Omega_at = 0.0; // accumulated Omega at the jump instant (stale-data bound)
    double delta_norm = 0.0;
};

struct RegressorExcitation {
    TransitionTimes transitions;
    double alpha_post = 0.0;       // energy of omega over [T_plus, t_e]
    double min_window_alpha = 0.0; // sliding-window minimum of the omega energy, width T
    bool single_excursion = false; // exactly one contiguous above-floor segment
    std::vector<WindowStat> windows;
    std::vector<JumpBound> jump_bounds;
};

inline RegressorExcitation analyze_regressor(const SimConfig& cfg,
                                             const ParameterSchedule& schedule,
                                             const Trajectory& traj) {
    RegressorExcitation r;
    const double dt = traj.dt;
    r.transitions = detect_transition_times(traj.omega, dt, cfg.eta_min);

    r.alpha_post = excitation_level(traj.omega, dt, cfg.T_plus, cfg.t_e);

    // Contiguity of the above-floor set (the floor-crossing structure that
    // the transition-time analysis presumes).
    const double thr = std::pow(10.0, cfg.eta_min);
    std::size_t segments = 0;
    bool above = false;
    for (double om : traj.omega) {
        const bool a = std::abs(om) > thr;
        if (a && !above) ++segments;
        above = a;
    }
    r.single_excursion = (segments == 1);

    // Sliding-window energy minimum over [t_start, t_e] (width T).
    const auto prefix = energy_prefix(traj.omega, dt);
    const std::size_t w = grid_index(cfg.T, dt);
    const std::size_t i_e = std::min(grid_index(cfg.t_e, dt), traj.samples() - 1);
    const std::size_t i_s = r.transitions.t_start ? grid_index(*r.transitions.t_start, dt) : 0;
    double min_alpha = std::numeric_limits<double>::infinity();
    for (std::size_t i = i_s; i + w <= i_e; ++i)
        min_alpha = std::min(min_alpha, prefix[i + w] - prefix[i]);
    r.min_window_alpha = std::isfinite(min_alpha) ? min_alpha : 0.0;

    // Window statistics before T+.
    const auto phi_prefix = energy_prefix(traj.phi, dt);
    const auto resets = detail::reset_indices(cfg);
    std::size_t win_start = 0;
    for (std::size_t ri = 0; ri < resets.size(); ++ri) {
        const std::size_t win_end = resets[ri];
        WindowStat ws;
        ws.t0 = static_cast<double>(win_start) * dt;
        ws.t1 = static_cast<double>(win_end) * dt;
        ws.level = phi_prefix[win_end] - phi_prefix[win_start];
        ws.floor = std::exp(-cfg.sigma * cfg.T) * ws.level;
        for (std::size_t i = win_start; i < win_end; ++i) {
            if (traj.Omega[i] >= ws.floor && ws.floor > 0.0) {
                ws.T0k = static_cast<double>(i) * dt;
                break;
            }
        }
        ws.Omega_end = traj.Omega[win_end - 1];
        for (const auto& j : schedule.jumps)
            if (j.time >= ws.t0 && j.time < ws.t1) ws.jump_times.push_back(j.time);
        r.windows.push_back(std::move(ws));
        win_start = win_end;
    }

    // Omega value accumulated at each jump instant (the bound on the stale
    // part of the window integral).
    for (const auto& j : schedule.jumps) {
        JumpBound jb;
        jb.time = j.time;
        jb.Omega_at = traj.Omega[grid_index(j.time, dt)];
        jb.delta_norm = norm2(j.delta);
        r.jump_bounds.push_back(jb);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Assumption checks and theoretical bounds
// ---------------------------------------------------------------------------

struct AssumptionFlags {
    bool assumption1 = false; // floor-crossing structure exists for every regressor
    bool assumption2 = false; // every sliding window of width T carries excitation
    bool assumption3 = false; // T_plus <= min_j T_j
    double met_from = 0.0;    // latest onset across regressors
    double min_T_j = 0.0;
};

inline AssumptionFlags check_assumptions(const SimConfig& cfg,
                                         std::span<const RegressorExcitation> reports,
                                         double a2_threshold = 1e-8) {
    AssumptionFlags f;
    if (reports.empty()) return f;
    f.assumption1 = true;
    f.assumption2 = true;
    double min_tj = std::numeric_limits<double>::infinity();
    double met_from = 0.0;
    for (const auto& r : reports) {
        f.assumption1 = f.assumption1 && r.transitions.t_start.has_value() &&
                        r.transitions.T_j.has_value() && r.single_excursion;
        f.assumption2 = f.assumption2 && r.min_window_alpha >= a2_threshold;
        if (r.transitions.T_j) min_tj = std::min(min_tj, *r.transitions.T_j);
        if (r.transitions.t_start) met_from = std::max(met_from, *r.transitions.t_start);
    }
    f.min_T_j = std::isfinite(min_tj) ? min_tj : 0.0;
    f.met_from = met_from;
    f.assumption3 = std::isfinite(min_tj) && cfg.T_plus <= min_tj;
    return f;
}

/// Bounds on the filtered regressor derived from the run data:
///   Omega_UB     = 1 / sigma                                   (always)
///   Omega_LB     = Delta_2 * exp(-sigma (t_e - T_plus)),  Delta_2 = min_j (T_j - T_plus)
///   Omega_bar_LB = 10^(-2 eta_min) * alpha_min * exp(-sigma (t_e - T_plus))
/// The bounds degenerate (and are flagged) when alpha_min vanishes, when no
/// regressor stays above the floor past T_plus, or when the computed lower
/// bound exceeds the upper bound.
struct TheoreticalBounds {
    double Omega_UB = 0.0;
    double Omega_LB = 0.0;
    double Omega_bar_LB = 0.0;
    double alpha_min = 0.0;
    double Delta_2 = 0.0;
    bool degenerate = false;
    std::string note;
};

inline TheoreticalBounds theoretical_bounds(const SimConfig& cfg,
                                            std::span<const RegressorExcitation> reports) {
    TheoreticalBounds b;
    b.Omega_UB = 1.0 / cfg.sigma;
    double alpha_min = std::numeric_limits<double>::infinity();
    double delta2 = std::numeric_limits<double>::infinity();
    for (const auto& r : reports) {
        alpha_min = std::min(alpha_min, r.alpha_post);
        if (r.transitions.T_j) delta2 = std::min(delta2, *r.transitions.T_j - cfg.T_plus);
    }
    b.alpha_min = std::isfinite(alpha_min) ? alpha_min : 0.0;
    b.Delta_2 = std::isfinite(delta2) ? delta2 : 0.0;
    const double forget = std::exp(-cfg.sigma * (cfg.t_e - cfg.T_plus));
    b.Omega_bar_LB = std::pow(10.0, -2.0 * cfg.eta_min) * b.alpha_min * forget;
    b.Omega_LB = b.Delta_2 > 0.0 ? b.Delta_2 * forget : 0.0;
    if (b.alpha_min <= 0.0) {
        b.degenerate = true;
        b.note = "alpha_min = 0: no post-T+ excitation, lower bounds are void";
    } else if (b.Delta_2 <= 0.0) {
        b.degenerate = true;
        b.note = "min_j T_j <= T_plus: window-structure lower bound is void";
    } else if (b.Omega_bar_LB > b.Omega_UB || b.Omega_LB > b.Omega_UB) {
        b.degenerate = true;
        b.note = "computed lower bound exceeds 1/sigma; saturated-case formula "
                 "does not apply on this interval";
    }
    return b;
}

struct ExcitationReport {
    std::vector<RegressorExcitation> regressors;
    AssumptionFlags assumptions;
    TheoreticalBounds bounds;
};

inline ExcitationReport excitation_report(const SimConfig& cfg, const ParameterSchedule& schedule,
                                          std::span<const Trajectory> trajectories) {
    ExcitationReport rep;
    for (const auto& tr : trajectories) rep.regressors.push_back(analyze_regressor(cfg, schedule, tr));
    rep.assumptions = check_assumptions(cfg, rep.regressors);
    rep.bounds = theoretical_bounds(cfg, rep.regressors);
    return rep;
}

} // namespace fepi
