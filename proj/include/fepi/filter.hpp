#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "fepi/common.hpp"

namespace fepi {

enum class FilterRegime { windowed, post_t_plus };

/// State of the finite-window integral filter with exponential forgetting.
///
/// Between resets the forgetting factor is e = exp(-sigma * (t - t_last_reset))
/// and the accumulators satisfy
///   Omega' = e * phi^2,      Yf_i' = e * Y_i * phi,
/// so Omega is the window integral of the normalized regressor energy with the
/// exponentially decaying weight anchored at the most recent reset. Resets
/// zero the accumulators and restart the weight at every window boundary
/// before T+, and once at T+; afterwards the filter integrates on [T+, t).
struct FilterState {
    double e = 1.0;
    double Omega = 0.0;
    Vec Yf;
    double t_last_reset = 0.0;
    FilterRegime regime = FilterRegime::windowed;
};

struct FilterDerivatives {
    double de = 0.0;
    double dOmega = 0.0;
    Vec dYf;
};

/// Right-hand side of the filter ODE for the current normalized regression
/// (phi, Y).
inline FilterDerivatives filter_derivatives(const FilterState& s, double phi,
                                            std::span<const double> Y, double sigma) {
    FilterDerivatives d;
    d.de = -sigma * s.e;
    d.dOmega = s.e * phi * phi;
    d.dYf.resize(Y.size());
    for (std::size_t i = 0; i < Y.size(); ++i) d.dYf[i] = s.e * Y[i] * phi;
    return d;
}

/// Applies the reset prescribed at a window boundary or at T+. `t` must be a
/// member of the event set; resetting anywhere else would break grid
/// alignment, so it is rejected.
inline void apply_reset(FilterState& s, double t, std::span<const double> event_times) {
    const bool known = std::any_of(event_times.begin(), event_times.end(), [t](double ev) {
        return std::abs(ev - t) <= 1e-9 * std::max(1.0, std::abs(ev));
    });
    if (!known) throw SimulationError("apply_reset: reset requested at a non-event time");
    if (s.regime == FilterRegime::post_t_plus)
        throw SimulationError("apply_reset: no resets occur after T+");
    s.e = 1.0;
    s.Omega = 0.0;
    std::fill(s.Yf.begin(), s.Yf.end(), 0.0);
    s.t_last_reset = t;
    const double t_plus = event_times.empty() ? t : event_times.back();
    if (std::abs(t - t_plus) <= 1e-9 * std::max(1.0, std::abs(t_plus)))
        s.regime = FilterRegime::post_t_plus;
}

} // namespace fepi
