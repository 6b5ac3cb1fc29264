#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fepi {

/// Classical fixed-step 4th-order scheme over a flat state vector. Stage
/// buffers are members so that stepping does not allocate.
class Rk4Stepper {
  public:
    explicit Rk4Stepper(std::size_t n) : k1_(n), k2_(n), k3_(n), k4_(n), tmp_(n) {}

    std::size_t size() const { return k1_.size(); }

    /// Advances y in place from t to t + h.
    /// Deriv: void(double t, std::span<const double> y, std::span<double> dydt)
    template <class Deriv>
    void step(Deriv&& f, double t, double h, std::span<double> y) {
        const std::size_t n = y.size();
        f(t, std::span<const double>(y), std::span<double>(k1_));
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * h * k1_[i];
        f(t + 0.5 * h, std::span<const double>(tmp_), std::span<double>(k2_));
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * h * k2_[i];
        f(t + 0.5 * h, std::span<const double>(tmp_), std::span<double>(k3_));
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * k3_[i];
        f(t + h, std::span<const double>(tmp_), std::span<double>(k4_));
        // weights applied per stage: the raw sum k1 + 2k2 + 2k3 + k4 can
        // overflow for states near the double range even when the scaled
        // increment is small
        const double w1 = h / 6.0;
        const double w2 = h / 3.0;
        for (std::size_t i = 0; i < n; ++i)
            y[i] += w1 * k1_[i] + w2 * k2_[i] + w2 * k3_[i] + w1 * k4_[i];
    }

  private:
    std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

} // namespace fepi
