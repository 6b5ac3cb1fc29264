#pragma once

#include <cmath>
#include <optional>

#include "fepi/common.hpp"
#include "fepi/normalize.hpp"
#include "fepi/signals.hpp"

namespace fepi {

/// All tunables of a single simulation run (one regressor).
///
/// Grid discipline: dt must exactly divide T, T_plus, every jump time and the
/// noise sample times, so that resets, parameter jumps and noise sample
/// boundaries land on grid points and no channel is ever interpolated across
/// a discontinuity.
struct SimConfig {
    double dt = 1e-4;
    double t_end = 10.0;
    double t_e = 10.0; // declared end of the excitation interval (defaults to t_end)

    double T = 0.5;      // filter window width
    double T_plus = 3.0; // time at which window filtering stops
    double sigma = 5.0;  // forgetting rate
    double gamma = 1e6;  // adaptation rate
    double eta_min = -1.0;

    Vec theta_hat0{0.0};

    InputSignal input = ExponentialInput{};
    std::optional<NoiseSpec> regressor_noise; // added to the measured regressor
    std::optional<NoiseSpec> output_noise;    // added to the measured output

    NormalizationConfig normalization() const { return NormalizationConfig{eta_min}; }

    void validate() const {
        if (!(dt > 0.0)) throw ConfigError("config: dt must be > 0");
        if (!(t_end > 0.0)) throw ConfigError("config: t_end must be > 0");
        if (!(T > 0.0)) throw ConfigError("config: T must be > 0");
        if (!(T_plus > 0.0 && T_plus < t_end))
            throw ConfigError("config: T_plus must satisfy 0 < T_plus < t_end");
        if (!(t_e > 0.0 && t_e <= t_end))
            throw ConfigError("config: t_e must satisfy 0 < t_e <= t_end");
        if (!(T < t_e)) throw ConfigError("config: window width T must be smaller than t_e");
        if (!(sigma > 0.0)) throw ConfigError("config: sigma must be > 0");
        if (!(gamma > 0.0)) throw ConfigError("config: gamma must be > 0");
        if (!std::isfinite(eta_min)) throw ConfigError("config: eta_min must be finite");
        if (theta_hat0.empty()) throw ConfigError("config: theta_hat0 must be non-empty");
        if (!divides_grid(dt, T)) throw ConfigError("config: dt must exactly divide T");
        if (!divides_grid(dt, T_plus)) throw ConfigError("config: dt must exactly divide T_plus");
        if (!divides_grid(dt, t_end)) throw ConfigError("config: dt must exactly divide t_end");
        if (regressor_noise) {
            regressor_noise->validate();
            if (!divides_grid(dt, regressor_noise->sample_time) ||
                regressor_noise->sample_time + 1e-12 < dt)
                throw ConfigError("config: dt must exactly divide the regressor noise sample_time");
        }
        if (output_noise) {
            output_noise->validate();
            if (!divides_grid(dt, output_noise->sample_time) ||
                output_noise->sample_time + 1e-12 < dt)
                throw ConfigError("config: dt must exactly divide the output noise sample_time");
        }
    }

    /// Cross-checks between the run config and the parameter schedule.
    void validate_with(const ParameterSchedule& schedule) const {
        validate();
        schedule.validate(t_e);
        if (schedule.dim() != theta_hat0.size())
            throw ConfigError("config: theta_hat0 dimension differs from the schedule");
        for (const auto& j : schedule.jumps)
            if (!divides_grid(dt, j.time))
                throw ConfigError("config: dt must exactly divide every jump time");
    }
};

} // namespace fepi
