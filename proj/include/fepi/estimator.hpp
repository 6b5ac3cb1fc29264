#pragma once

#include <cmath>
#include <span>

#include "fepi/common.hpp"

namespace fepi {

struct EstimatorState {
    Vec theta_hat;
};

/// One step of the gradient law theta_hat' = -gamma * Omega * (Omega *
/// theta_hat - Yf), integrated exactly over [t, t+h] with Omega and Yf frozen
/// at their left-endpoint values:
///
///   theta_hat <- theta_hat * m + (Yf / Omega) * (1 - m),  m = exp(-gamma Omega^2 h)
///
/// The exact-exponential form is unconditionally stable, which matters at the
/// working adaptation rates (gamma Omega^2 can exceed 1e4 per second, far
/// beyond what an explicit scheme tolerates at practical step sizes). With
/// Omega == 0 the law is frozen and the estimate is left untouched.
inline void estimator_step(EstimatorState& st, double Omega, std::span<const double> Yf,
                           double gamma, double h) {
    if (!(h > 0.0)) throw ConfigError("estimator_step: step size must be > 0");
    if (!(Omega >= 0.0)) throw SimulationError("estimator_step: Omega must be >= 0");
    if (Omega == 0.0) return;
    const double x = gamma * Omega * Omega * h;
    const double m = std::exp(-x);
    const double one_minus_m = -std::expm1(-x);
    for (std::size_t i = 0; i < st.theta_hat.size(); ++i) {
        const double target = Yf[i] / Omega;
        st.theta_hat[i] = st.theta_hat[i] * m + target * one_minus_m;
    }
}

} // namespace fepi
