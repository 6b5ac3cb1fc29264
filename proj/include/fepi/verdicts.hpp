#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fepi/common.hpp"

namespace fepi {

enum class BoundednessClass { IB, IEB, GES, EUB, Unbounded };

inline const char* to_string(BoundednessClass c) {
    switch (c) {
        case BoundednessClass::IB: return "IB";
        case BoundednessClass::IEB: return "IEB";
        case BoundednessClass::GES: return "GES";
        case BoundednessClass::EUB: return "EUB";
        case BoundednessClass::Unbounded: return "unbounded";
    }
    return "?";
}

inline std::optional<BoundednessClass> boundedness_class_from_string(const std::string& s) {
    if (s == "IB") return BoundednessClass::IB;
    if (s == "IEB") return BoundednessClass::IEB;
    if (s == "GES") return BoundednessClass::GES;
    if (s == "EUB") return BoundednessClass::EUB;
    if (s == "unbounded") return BoundednessClass::Unbounded;
    return std::nullopt;
}

/// Operational thresholds for the boundedness definitions. The definitions
/// are existential (there exist kappa, rho, R); classification fits explicit
/// values and applies these cutoffs so that a verdict is deterministic and
/// reproducible.
struct ClassifyThresholds {
    double rho_max = 2.0;       // overshoot cap for the exponential envelope
    double theta_decay = 0.5;   // required end-to-start decay for an exponential verdict
    double residual_rel = 0.05; // "R = 0" tolerance, relative to the interval's starting error
    double zero_rel = 1e-9;     // values below zero_rel * (trajectory sup) count as converged
    double ges_eps = 1e-6;      // terminal ball for GES, relative to `scale`
    double scale = 1.0;         // problem magnitude reference (largest schedule jump norm)
};

/// Fitted classification of one interval of an error trajectory.
struct BoundednessVerdict {
    double t0 = 0.0;
    double t1 = 0.0;
    BoundednessClass cls = BoundednessClass::IB;
    double kappa = 0.0; // fitted decay rate (1/s)
    double rho = 1.0;   // fitted overshoot factor
    double R = 0.0;     // fitted residual bound
    std::string note;
};

namespace detail {

/// Largest finite sample (scale reference for the zero floor).
inline double finite_sup(std::span<const double> err) {
    double m = 0.0;
    for (double e : err)
        if (std::isfinite(e)) m = std::max(m, e);
    return m;
}

struct EnvelopeFit {
    double kappa_raw = 0.0; // decay-rate estimate (half-life based)
    double kappa = 0.0;     // envelope-feasible rate (kappa_raw, shrunk if needed)
    double rho = 1.0;
    bool feasible = false; // pointwise bound rho * e1 * exp(-kappa t) holds with rho <= rho_max
};

/// Fits the decay rate from the first half-crossing (scale-free, so equally
/// excited runs of different amplitude report the same rate), then checks the
/// pointwise envelope, shrinking the rate if needed to keep the overshoot
/// within rho_max. Samples at or below `floor` are treated as converged and
/// impose no envelope constraint. Ratios are evaluated in the log domain; a
/// rate this large times a long interval overflows exp().
inline EnvelopeFit fit_envelope(std::span<const double> seg, double dt, double e1, double floor,
                                double rho_max) {
    EnvelopeFit fit;
    const double half = 0.5 * e1;
    double kappa = 0.0;
    for (std::size_t i = 1; i < seg.size(); ++i) {
        if (seg[i] <= half) {
            double tcross = static_cast<double>(i) * dt;
            if (seg[i - 1] > half && seg[i - 1] != seg[i]) {
                const double frac = (seg[i - 1] - half) / (seg[i - 1] - seg[i]);
                tcross = (static_cast<double>(i - 1) + frac) * dt;
            }
            kappa = std::log(2.0) / tcross;
            break;
        }
    }
    if (kappa == 0.0) {
        // never halves inside the interval; fall back to the end-to-end rate
        const double e_end = seg.back();
        const double len = static_cast<double>(seg.size() - 1) * dt;
        if (e_end < e1 && e_end > 0.0 && len > 0.0)
            kappa = std::log(e1 / std::max(e_end, floor)) / len;
    }
    if (!(kappa > 0.0)) return fit;
    fit.kappa_raw = kappa;

    const double log_cap = std::log(rho_max * e1);
    for (std::size_t i = 1; i < seg.size(); ++i) {
        if (seg[i] <= floor || seg[i] <= 0.0) continue;
        const double dt_i = static_cast<double>(i) * dt;
        const double k_max = (log_cap - std::log(seg[i])) / dt_i;
        kappa = std::min(kappa, k_max);
    }
    if (!(kappa > 0.0)) return fit;
    double log_rho = 0.0;
    for (std::size_t i = 0; i < seg.size(); ++i) {
        if (seg[i] <= floor || seg[i] <= 0.0) continue;
        const double dt_i = static_cast<double>(i) * dt;
        log_rho = std::max(log_rho, std::log(seg[i] / e1) + kappa * dt_i);
    }
    fit.kappa = kappa;
    fit.rho = std::exp(log_rho);
    fit.feasible = fit.rho <= rho_max * (1.0 + 1e-12);
    return fit;
}

} // namespace detail

/// Classifies the error trajectory on [t0, t1).
///
/// The right endpoint sample is excluded unless it closes the trajectory: the
/// value recorded at a shared boundary belongs to the next interval (the true
/// parameters are right-continuous, so the sample at a jump instant already
/// carries the post-jump error). "e(t1)" in the decay test is therefore the
/// last sample before t1.
///
/// Non-terminal intervals resolve to IEB when the fitted envelope holds with
/// kappa > 0 and rho <= rho_max, the error decays to theta_decay of its
/// starting value, and the fitted residual is zero within residual_rel of the
/// starting value; otherwise to IB. Terminal intervals (`terminal = true`)
/// resolve to GES when the envelope holds and the final error is inside the
/// ges_eps * scale ball, otherwise to EUB. Non-finite samples yield
/// `unbounded` with the offending time in the note.
inline BoundednessVerdict classify_interval(std::span<const double> err, double dt, double t0,
                                            double t1, const ClassifyThresholds& th,
                                            bool terminal = false) {
    BoundednessVerdict v;
    v.t0 = t0;
    v.t1 = t1;
    const std::size_t i0 = grid_index(t0, dt);
    std::size_t i1 = grid_index(t1, dt);
    if (i0 >= i1 || i1 >= err.size())
        throw ConfigError("classify_interval: interval is empty or off the grid");
    const bool closes_trajectory = (i1 == err.size() - 1);
    const std::size_t last = closes_trajectory ? i1 : i1 - 1;
    const auto seg = err.subspan(i0, last - i0 + 1);

    for (std::size_t i = 0; i < seg.size(); ++i) {
        if (!std::isfinite(seg[i])) {
            v.cls = BoundednessClass::Unbounded;
            v.note = "non-finite error at t = " + std::to_string((i0 + i) * dt);
            return v;
        }
    }

    const double ref = detail::finite_sup(err);
    const double floor = th.zero_rel * ref;
    const double e1 = seg.front();
    const double e_end = seg.back();
    const double sup = *std::max_element(seg.begin(), seg.end());
    const double len = static_cast<double>(seg.size() - 1) * dt;

    if (sup <= floor) {
        // Converged throughout; exponentially bounded with any rate. Report
        // the fastest rate the grid resolves.
        v.cls = terminal ? BoundednessClass::GES : BoundednessClass::IEB;
        v.kappa = std::log(2.0) / dt;
        v.rho = 1.0;
        v.R = 0.0;
        v.note = "error at the numerical zero floor";
        return v;
    }

    if (e1 <= floor) {
        // Grows out of the zero floor: bounded, but no decaying envelope from
        // e(t0) can cover it.
        v.cls = terminal ? BoundednessClass::EUB : BoundednessClass::IB;
        v.kappa = len > 0.0 ? std::log(2.0) / len : 0.0;
        v.rho = th.rho_max;
        v.R = sup;
        v.note = "error grows from the numerical zero floor";
        return v;
    }

    const auto fit = detail::fit_envelope(seg, dt, e1, floor, th.rho_max);
    const bool decay_ok = e_end <= th.theta_decay * e1;
    const bool residual_ok = e_end <= th.residual_rel * e1;

    if (!terminal) {
        if (fit.feasible && decay_ok && residual_ok) {
            v.cls = BoundednessClass::IEB;
            v.kappa = fit.kappa;
            v.rho = fit.rho;
            v.R = 0.0;
            return v;
        }
        v.cls = BoundednessClass::IB;
        // Report the raw decay rate with the residual absorbing whatever the
        // decaying part does not cover; shrinking the rate instead would hide
        // a plateau inside a slow envelope.
        v.kappa = fit.kappa_raw > 0.0 ? fit.kappa_raw : (len > 0.0 ? std::log(2.0) / len : 0.0);
        v.rho = 1.0;
        double R = 0.0;
        for (std::size_t i = 0; i < seg.size(); ++i) {
            const double env = e1 * std::exp(-v.kappa * static_cast<double>(i) * dt);
            R = std::max(R, seg[i] - env);
        }
        v.R = std::max(R, 0.0);
        return v;
    }

    const double ges_ball = std::max(th.ges_eps * th.scale, floor);
    if (fit.feasible && e_end <= ges_ball) {
        v.cls = BoundednessClass::GES;
        v.kappa = fit.kappa;
        v.rho = fit.rho;
        v.R = 0.0;
        return v;
    }
    v.cls = BoundednessClass::EUB;
    v.kappa = fit.kappa_raw > 0.0 ? fit.kappa_raw : (len > 0.0 ? std::log(2.0) / len : 0.0);
    v.rho = 1.0;
    // Ultimate bound: the supremum of the trailing half of the interval.
    const std::size_t tail = seg.size() / 2;
    v.R = *std::max_element(seg.begin() + tail, seg.end());
    return v;
}

// ---------------------------------------------------------------------------
// Envelope checks
// ---------------------------------------------------------------------------

/// Exponential-plus-residual envelope
///   env(t) = err_anchor * exp(-0.5 * gamma * level^2 * (t - t_anchor)) + residual
/// with `level` one of the guaranteed filtered-regressor floors (the window
/// floor Omega(T0k) or the post-excitation bound). The 0.5 exponent is the
/// weaker of the two appearing in the derivations; the margin against the
/// stronger exponent (without the 0.5) is reported but never failed on.
struct EnvelopeSpec {
    std::string name;    // "window-residual", "window-exp", "terminal-residual", "terminal-exp", ...
    double gamma = 0.0;
    double level = 0.0;
    double t_anchor = 0.0;
    double err_anchor = 0.0;
    double residual = 0.0;
};

struct EnvelopeResult {
    bool pass = false;
    double max_excess = 0.0; // largest err/env ratio observed
    std::optional<double> first_violation_time;
    bool strong_exponent_pass = false; // informational: same check with exponent gamma level^2
};

/// Pointwise check err(t) <= env(t) * (1 + tol_rel) + tol_abs over
/// [t_anchor, t_last].
inline EnvelopeResult envelope_check(std::span<const double> err, double dt,
                                     const EnvelopeSpec& spec, double tol_rel = 1e-6,
                                     double tol_abs = 1e-12) {
    if (!(spec.level >= 0.0) || !(spec.gamma > 0.0))
        throw ConfigError("envelope_check: missing or invalid parameters for bound " + spec.name);
    EnvelopeResult res;
    res.pass = true;
    res.strong_exponent_pass = true;
    const std::size_t ia = grid_index(spec.t_anchor, dt);
    if (ia >= err.size()) throw ConfigError("envelope_check: anchor beyond the trajectory");
    const double rate = 0.5 * spec.gamma * spec.level * spec.level;
    for (std::size_t i = ia; i < err.size(); ++i) {
        const double dt_i = static_cast<double>(i - ia) * dt;
        const double env = spec.err_anchor * std::exp(-rate * dt_i) + spec.residual;
        const double allowed = env * (1.0 + tol_rel) + tol_abs;
        if (err[i] > allowed) {
            res.pass = false;
            if (!res.first_violation_time) res.first_violation_time = static_cast<double>(i) * dt;
        }
        if (allowed > 0.0) res.max_excess = std::max(res.max_excess, err[i] / allowed);
        const double env_strong = spec.err_anchor * std::exp(-2.0 * rate * dt_i) + spec.residual;
        if (err[i] > env_strong * (1.0 + tol_rel) + tol_abs) res.strong_exponent_pass = false;
    }
    return res;
}

// ---------------------------------------------------------------------------
// Prediction table comparison
// ---------------------------------------------------------------------------

struct TableRow {
    double t0 = 0.0;
    double t1 = 0.0;
    BoundednessClass expected = BoundednessClass::IB;
};

struct TableComparison {
    struct Row {
        TableRow expected;
        BoundednessVerdict actual;
        bool match = false;
    };
    std::vector<Row> rows;
    std::size_t matches = 0;
    bool all_match = true;
};

/// Row-by-row comparison of classified verdicts against an expectation list
/// over the same intervals. The interval lists must agree.
inline TableComparison table_report(std::span<const BoundednessVerdict> verdicts,
                                    std::span<const TableRow> expected) {
    if (verdicts.size() != expected.size())
        throw ConfigError("table_report: verdict and expectation lists differ in length");
    TableComparison cmp;
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
        const double tol = 1e-9;
        if (std::abs(verdicts[i].t0 - expected[i].t0) > tol ||
            std::abs(verdicts[i].t1 - expected[i].t1) > tol)
            throw ConfigError("table_report: interval mismatch between lists");
        TableComparison::Row row;
        row.expected = expected[i];
        row.actual = verdicts[i];
        row.match = verdicts[i].cls == expected[i].expected;
        cmp.all_match = cmp.all_match && row.match;
        if (row.match) ++cmp.matches;
        cmp.rows.push_back(std::move(row));
    }
    return cmp;
}

} // namespace fepi
