#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fepi {

/// Parameter vectors are small (typically one component); a plain vector keeps
/// the dimension a runtime property.
using Vec = std::vector<double>;

/// A configuration value violates a documented invariant. The message names
/// the offending field (and file:line when raised by the config parser).
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// The stepper produced a non-finite state. The message names the channel and
/// the simulation time at which it was detected.
class SimulationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline double norm2(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    if (m == 0.0 || !std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : v) {
        const double r = x / m;
        s += r * r;
    }
    return m * std::sqrt(s);
}

inline bool all_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

/// True when `step` divides `value` on the time grid (relative tolerance on
/// the integer quotient; grid events must land exactly on step boundaries).
inline bool divides_grid(double step, double value) {
    if (!(step > 0.0) || !(value >= 0.0)) return false;
    const double q = value / step;
    return std::abs(q - std::round(q)) <= 1e-6 * std::max(1.0, q);
}

/// Nearest grid index of `t` for spacing `dt`.
inline std::size_t grid_index(double t, double dt) {
    return static_cast<std::size_t>(std::llround(t / dt));
}

} // namespace fepi
