#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "fepi/common.hpp"

namespace fepi {

/// Uniform-grid recording of one simulation run. All channels share the same
/// grid; `omega` is the measured regressor (true value plus measurement noise
/// when configured), `eta`/`phi` are derived from it, and `err_norm` is the
/// Euclidean norm of theta_hat - theta_true at every sample. Vector channels
/// are stored component-major: yf[component][sample].
struct Trajectory {
    double dt = 0.0;
    std::vector<double> t;
    std::vector<double> omega;
    std::vector<double> eta;
    std::vector<double> phi;
    std::vector<double> Omega;
    std::vector<std::vector<double>> yf;
    std::vector<std::vector<double>> theta_hat;
    std::vector<std::vector<double>> theta_true;
    std::vector<double> err_norm;

    std::size_t samples() const { return t.size(); }
    std::size_t dim() const { return theta_hat.size(); }

    void reserve(std::size_t n, std::size_t d) {
        t.reserve(n);
        omega.reserve(n);
        eta.reserve(n);
        phi.reserve(n);
        Omega.reserve(n);
        err_norm.reserve(n);
        yf.assign(d, {});
        theta_hat.assign(d, {});
        theta_true.assign(d, {});
        for (std::size_t i = 0; i < d; ++i) {
            yf[i].reserve(n);
            theta_hat[i].reserve(n);
            theta_true[i].reserve(n);
        }
    }

    /// First non-finite value across all channels, if any (eta is exempt:
    /// -inf encodes a zero regressor there).
    std::optional<std::pair<std::string, double>> first_non_finite() const {
        for (std::size_t i = 0; i < samples(); ++i) {
            if (!std::isfinite(omega[i])) return {{"omega", t[i]}};
            if (!std::isfinite(phi[i])) return {{"phi", t[i]}};
            if (!std::isfinite(Omega[i])) return {{"Omega", t[i]}};
            for (std::size_t c = 0; c < dim(); ++c) {
                if (!std::isfinite(yf[c][i])) return {{"Yf_" + std::to_string(c + 1), t[i]}};
                if (!std::isfinite(theta_hat[c][i]))
                    return {{"theta_hat_" + std::to_string(c + 1), t[i]}};
                if (!std::isfinite(theta_true[c][i]))
                    return {{"theta_true_" + std::to_string(c + 1), t[i]}};
            }
            if (!std::isfinite(err_norm[i])) return {{"err_norm", t[i]}};
        }
        return std::nullopt;
    }
};

} // namespace fepi
