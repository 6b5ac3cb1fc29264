#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fepi/common.hpp"
#include "fepi/estimator.hpp"
#include "fepi/filter.hpp"
#include "fepi/normalize.hpp"
#include "fepi/rk4.hpp"
#include "fepi/sim_config.hpp"
#include "fepi/signals.hpp"
#include "fepi/trajectory.hpp"

namespace fepi {

/// Ordered reset times of the windowed filter: every window boundary k*T that
/// precedes T_plus, plus the final reset at T_plus itself.
inline std::vector<double> event_times(const SimConfig& cfg) {
    cfg.validate();
    std::vector<double> events;
    for (std::size_t k = 1;; ++k) {
        const double tk = static_cast<double>(k) * cfg.T;
        if (tk >= cfg.T_plus - 0.5 * cfg.dt) break;
        events.push_back(tk);
    }
    events.push_back(cfg.T_plus);
    return events;
}

namespace detail {

/// Reset step indices matching event_times, exact on the grid.
inline std::vector<std::size_t> reset_indices(const SimConfig& cfg) {
    const auto n_T = grid_index(cfg.T, cfg.dt);
    const auto n_T_plus = grid_index(cfg.T_plus, cfg.dt);
    std::vector<std::size_t> idx;
    for (std::size_t k = 1; k * n_T < n_T_plus; ++k) idx.push_back(k * n_T);
    idx.push_back(n_T_plus);
    return idx;
}

} // namespace detail

/// Advances the coupled regressor/filter system with the fixed-step 4th-order
/// scheme and the estimator with the exact-exponential step, applying filter
/// resets exactly at event times and parameter jumps exactly at their grid
/// points. Within a step the true parameters and the held noise samples are
/// frozen at the step's left endpoint; the estimator likewise consumes the
/// left-endpoint Omega and Yf. Records every channel at every grid point.
///
/// Throws SimulationError naming the channel and time if any state stops
/// being finite.
inline Trajectory integrate_system(const SimConfig& cfg, const ParameterSchedule& schedule) {
    cfg.validate_with(schedule);

    const std::size_t steps = grid_index(cfg.t_end, cfg.dt);
    const std::size_t n = schedule.dim();
    const double dt = cfg.dt;
    const double floor_abs = cfg.normalization().floor_abs();
    const double gain = cfg.normalization().gain();

    NoiseSequence w_reg, w_out;
    if (cfg.regressor_noise) w_reg = NoiseSequence(*cfg.regressor_noise, cfg.t_end);
    if (cfg.output_noise) w_out = NoiseSequence(*cfg.output_noise, cfg.t_end);

    const auto resets = detail::reset_indices(cfg);
    std::size_t next_reset = 0;

    std::vector<std::size_t> jump_idx(schedule.jumps.size());
    for (std::size_t j = 0; j < schedule.jumps.size(); ++j)
        jump_idx[j] = grid_index(schedule.jumps[j].time, dt);
    std::size_t next_jump = 0;

    // Flat ODE state: [omega, e, Omega, Yf_0..Yf_{n-1}]
    std::vector<double> state(3 + n, 0.0);
    state[1] = 1.0; // forgetting factor starts at 1
    Rk4Stepper rk(state.size());

    EstimatorState est{cfg.theta_hat0};
    Vec theta = schedule.theta0;

    // Held per step (left endpoint):
    double w1 = 0.0, w2 = 0.0;

    auto deriv = [&](double tau, std::span<const double> y, std::span<double> dy) {
        const double om_true = y[0];
        const double om_meas = om_true + w1;
        const auto nf = normalization_factor(om_meas, floor_abs, gain);
        dy[0] = -om_true + input_value(cfg.input, tau);
        dy[1] = -cfg.sigma * y[1];
        dy[2] = y[1] * nf.phi * nf.phi;
        for (std::size_t c = 0; c < n; ++c) {
            const double Yc = (om_true * theta[c] + w2) * nf.f;
            dy[3 + c] = y[1] * Yc * nf.phi;
        }
    };

    Trajectory traj;
    traj.dt = dt;
    traj.reserve(steps + 1, n);
    Vec err_diff(n, 0.0);

    for (std::size_t i = 0; i <= steps; ++i) {
        const double t = static_cast<double>(i) * dt;

        while (next_jump < jump_idx.size() && jump_idx[next_jump] == i) {
            const auto& j = schedule.jumps[next_jump];
            for (std::size_t c = 0; c < n; ++c) theta[c] += j.delta[c];
            ++next_jump;
        }
        if (next_reset < resets.size() && resets[next_reset] == i) {
            state[1] = 1.0;
            state[2] = 0.0;
            for (std::size_t c = 0; c < n; ++c) state[3 + c] = 0.0;
            ++next_reset;
        }

        w1 = w_reg.at_time(t);
        w2 = w_out.at_time(t);

        const double om_meas = state[0] + w1;
        const auto nf = normalization_factor(om_meas, floor_abs, gain);

        traj.t.push_back(t);
        traj.omega.push_back(om_meas);
        traj.eta.push_back(om_meas == 0.0 ? -std::numeric_limits<double>::infinity()
                                          : std::log10(std::abs(om_meas)));
        traj.phi.push_back(nf.phi);
        traj.Omega.push_back(state[2]);
        for (std::size_t c = 0; c < n; ++c) {
            traj.yf[c].push_back(state[3 + c]);
            traj.theta_hat[c].push_back(est.theta_hat[c]);
            traj.theta_true[c].push_back(theta[c]);
            err_diff[c] = est.theta_hat[c] - theta[c];
        }
        traj.err_norm.push_back(norm2(err_diff));

        bool finite = std::isfinite(om_meas) && std::isfinite(state[2]);
        for (std::size_t c = 0; finite && c < n; ++c)
            finite = finite && std::isfinite(state[3 + c]) && std::isfinite(est.theta_hat[c]) &&
                     std::isfinite(theta[c]);
        if (!finite) {
            const auto bad = traj.first_non_finite();
            const std::string channel = bad ? bad->first : "state";
            const double when = bad ? bad->second : t;
            throw SimulationError("simulation: channel '" + channel +
                                  "' became non-finite at t = " + std::to_string(when));
        }

        if (i == steps) break;

        estimator_step(est, state[2], std::span<const double>(state).subspan(3, n), cfg.gamma, dt);
        rk.step(deriv, t, dt, std::span<double>(state));
    }
    return traj;
}

} // namespace fepi
