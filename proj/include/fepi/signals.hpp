#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <variant>
#include <vector>

#include "fepi/common.hpp"
#include "fepi/rk4.hpp"

namespace fepi {

// ---------------------------------------------------------------------------
// Piecewise-constant true parameters
// ---------------------------------------------------------------------------

/// True unknown parameters: a base vector plus timed jump deltas. The value
/// at time t is the right-continuous cumulative sum of all jumps with
/// time <= t.
struct ParameterSchedule {
    Vec theta0;
    struct Jump {
        double time = 0.0;
        Vec delta;
    };
    std::vector<Jump> jumps;

    std::size_t dim() const { return theta0.size(); }

    /// Jump times strictly increasing, all before t_e, deltas matching the
    /// base dimension.
    void validate(double t_e) const {
        if (theta0.empty()) throw ConfigError("schedule: theta0 must be non-empty");
        double prev = -1.0;
        for (const auto& j : jumps) {
            if (j.delta.size() != theta0.size())
                throw ConfigError("schedule: jump delta dimension differs from theta0");
            if (!(j.time > prev))
                throw ConfigError("schedule: jump times must be strictly increasing");
            if (!(j.time < t_e))
                throw ConfigError("schedule: jump times must precede the excitation end t_e");
            prev = j.time;
        }
    }

    Vec eval(double t) const {
        Vec theta = theta0;
        for (const auto& j : jumps) {
            if (j.time > t) break;
            for (std::size_t i = 0; i < theta.size(); ++i) theta[i] += j.delta[i];
        }
        return theta;
    }

    /// Value immediately before t (left limit at jump instants).
    Vec eval_before(double t) const {
        Vec theta = theta0;
        for (const auto& j : jumps) {
            if (j.time >= t) break;
            for (std::size_t i = 0; i < theta.size(); ++i) theta[i] += j.delta[i];
        }
        return theta;
    }

    double max_jump_norm() const {
        double m = 0.0;
        for (const auto& j : jumps) m = std::max(m, norm2(j.delta));
        return m;
    }
};

inline Vec schedule_eval(const ParameterSchedule& s, double t) { return s.eval(t); }

// ---------------------------------------------------------------------------
// Band-limited measurement noise
// ---------------------------------------------------------------------------

/// Sample-and-hold Gaussian noise: independent draws with variance
/// power / sample_time, each held constant over one sample interval, scaled
/// by `scale`. Deterministic in `seed`.
struct NoiseSpec {
    double power = 0.0;
    double sample_time = 1e-4;
    std::uint64_t seed = 0;
    double scale = 1.0;

    void validate() const {
        if (!(power >= 0.0)) throw ConfigError("noise: power must be >= 0");
        if (!(sample_time > 0.0)) throw ConfigError("noise: sample_time must be > 0");
    }
};

/// Realized noise sequence over [0, t_end]. A default-constructed sequence is
/// identically zero (the noise-free case).
class NoiseSequence {
  public:
    NoiseSequence() = default;

    NoiseSequence(const NoiseSpec& spec, double t_end) : sample_time_(spec.sample_time) {
        spec.validate();
        const std::size_t count = static_cast<std::size_t>(std::ceil(t_end / spec.sample_time)) + 1;
        values_.resize(count, 0.0);
        if (spec.power > 0.0) {
            std::mt19937_64 rng(spec.seed);
            std::normal_distribution<double> dist(0.0, std::sqrt(spec.power / spec.sample_time));
            for (double& v : values_) v = spec.scale * dist(rng);
        }
    }

    bool zero() const { return values_.empty(); }

    double at_time(double t) const {
        if (values_.empty()) return 0.0;
        auto idx = static_cast<std::size_t>(std::floor(t / sample_time_));
        return values_[std::min(idx, values_.size() - 1)];
    }

  private:
    double sample_time_ = 1.0;
    std::vector<double> values_;
};

/// Noise samples on an explicit time grid.
inline std::vector<double> band_limited_noise(const NoiseSpec& spec,
                                              const std::vector<double>& t_grid) {
    std::vector<double> out(t_grid.size(), 0.0);
    if (t_grid.empty()) return out;
    NoiseSequence seq(spec, t_grid.back());
    for (std::size_t i = 0; i < t_grid.size(); ++i) out[i] = seq.at_time(t_grid[i]);
    return out;
}

// ---------------------------------------------------------------------------
// Regressor model and raw regression
// ---------------------------------------------------------------------------

/// u(t) = amplitude * exp(-rate * t)
struct ExponentialInput {
    double amplitude = 1.0;
    double rate = 1.0;
};

/// User-supplied samples on a uniform grid, linearly interpolated between
/// samples and held at the final value afterwards.
struct SampledInput {
    double dt = 0.0;
    std::vector<double> values;
};

using InputSignal = std::variant<ExponentialInput, SampledInput>;

inline double input_value(const InputSignal& u, double t) {
    if (const auto* e = std::get_if<ExponentialInput>(&u))
        return e->amplitude * std::exp(-e->rate * t);
    const auto& s = std::get<SampledInput>(u);
    if (s.values.empty()) return 0.0;
    const double pos = t / s.dt;
    const auto i = static_cast<std::size_t>(std::floor(pos));
    if (i + 1 >= s.values.size()) return s.values.back();
    const double frac = pos - static_cast<double>(i);
    return s.values[i] + frac * (s.values[i + 1] - s.values[i]);
}

/// First-order regressor model omega' = -omega + u, omega(0) = 0, advanced by
/// the fixed-step 4th-order scheme on the given uniform grid.
inline std::vector<double> regressor_first_order(const InputSignal& u,
                                                 const std::vector<double>& t_grid) {
    std::vector<double> omega(t_grid.size(), 0.0);
    if (t_grid.size() < 2) return omega;
    const double h = t_grid[1] - t_grid[0];
    Rk4Stepper rk(1);
    double state[1] = {0.0};
    auto deriv = [&u](double t, std::span<const double> y, std::span<double> dy) {
        dy[0] = -y[0] + input_value(u, t);
    };
    for (std::size_t i = 0; i + 1 < t_grid.size(); ++i) {
        rk.step(deriv, t_grid[i], h, std::span<double>(state, 1));
        omega[i + 1] = state[0];
    }
    return omega;
}

/// Measured output y = omega * theta + w, componentwise.
inline Vec lre_output(double omega, const Vec& theta, const Vec& w) {
    Vec y(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i)
        y[i] = omega * theta[i] + (i < w.size() ? w[i] : 0.0);
    return y;
}

} // namespace fepi
