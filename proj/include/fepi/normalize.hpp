#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include "fepi/common.hpp"

namespace fepi {

/// Excitation-normalization parameters. `eta_min` is the decimal-exponent
/// floor: regressors with |omega| above 10^eta_min are mapped to a normalized
/// regressor of exactly 1, smaller ones are scaled up by 10^-eta_min.
struct NormalizationConfig {
    double eta_min = -1.0;

    /// |omega| at the saturation boundary, 10^eta_min.
    double floor_abs() const { return std::pow(10.0, eta_min); }
    /// Saturated-branch gain, 10^-eta_min.
    double gain() const { return std::pow(10.0, -eta_min); }
};

/// Decimal decomposition omega = sign * 10^eta. `eta` is empty when
/// omega == 0; the exponent is -infinity in that case and downstream code
/// treats it through the saturation branch.
struct Decomposition {
    double sign = 1.0;
    std::optional<double> eta;
};

inline Decomposition decompose(double omega) {
    if (!std::isfinite(omega)) throw SimulationError("decompose: non-finite regressor value");
    Decomposition d;
    d.sign = (omega >= 0.0) ? 1.0 : -1.0;
    if (omega != 0.0) d.eta = std::log10(std::abs(omega));
    return d;
}

/// Decimal exponent as a double, -inf for omega == 0 (trajectory channel
/// representation).
inline double decimal_exponent(double omega) {
    const auto d = decompose(omega);
    return d.eta ? *d.eta : -std::numeric_limits<double>::infinity();
}

/// The multiplier f(omega) = sgn(omega) * 10^-sat(eta) and the normalized
/// regressor phi = omega * f(omega).
struct NormalizationFactor {
    double f = 0.0;
    double phi = 0.0;
};

/// Branch-exact evaluation: phi is exactly 1 above the floor and
/// |omega| * 10^-eta_min (clamped to 1) at or below it, so phi is in [0, 1]
/// for every finite input. `floor_abs` and `gain` come from
/// NormalizationConfig; they are passed precomputed because this sits in the
/// stepper's inner loop.
inline NormalizationFactor normalization_factor(double omega, double floor_abs, double gain) {
    if (!std::isfinite(omega)) throw SimulationError("normalization: non-finite regressor value");
    NormalizationFactor r;
    const double mag = std::abs(omega);
    if (mag == 0.0) {
        r.f = gain; // sgn(0) = +1, sat(-inf) = eta_min
        r.phi = 0.0;
        return r;
    }
    if (mag > floor_abs) {
        r.f = 1.0 / omega; // sgn(omega) * 10^-log10|omega|
        r.phi = 1.0;
        return r;
    }
    r.f = (omega >= 0.0) ? gain : -gain;
    r.phi = std::min(mag * gain, 1.0);
    return r;
}

inline NormalizationFactor normalization_factor(double omega, const NormalizationConfig& cfg) {
    return normalization_factor(omega, cfg.floor_abs(), cfg.gain());
}

struct NormalizedRegression {
    Vec Y;
    double phi = 0.0;
};

/// Multiplies the raw regression by f(omega): Y = y * f, phi = omega * f.
/// When y = omega * theta exactly, Y = phi * theta holds up to rounding.
inline NormalizedRegression normalized_regression(const Vec& y, double omega,
                                                  const NormalizationConfig& cfg) {
    const auto nf = normalization_factor(omega, cfg);
    NormalizedRegression out;
    out.phi = nf.phi;
    out.Y.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out.Y[i] = y[i] * nf.f;
    return out;
}

} // namespace fepi
