#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "mmlab/error.hpp"

namespace mmlab {

// Classical fourth-order Runge-Kutta on a flat state vector. `rhs(t, y, dydt)`
// fills dydt for state y at time t. Scratch buffers are reused across calls.
class Rk4 {
public:
  explicit Rk4(std::size_t size) : k1_(size), k2_(size), k3_(size), k4_(size), tmp_(size) {}

  template <class Rhs>
  void step(std::vector<double>& y, double t, double dt, Rhs&& rhs) {
    const std::size_t n = y.size();
    rhs(t, y, k1_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * dt * k1_[i];
    rhs(t + 0.5 * dt, tmp_, k2_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * dt * k2_[i];
    rhs(t + 0.5 * dt, tmp_, k3_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + dt * k3_[i];
    rhs(t + dt, tmp_, k4_);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] += dt / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
      if (!std::isfinite(y[i])) throw IntegrationError("non-finite state after Runge-Kutta step");
    }
  }

private:
  std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

// Number of fixed steps covering `duration` at nominal step `dt`; the last
// step is not shortened, so callers use duration / steps as the actual step.
inline std::size_t step_count(double dt, double duration) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("time step must be positive and finite");
  if (!(duration >= 0.0) || !std::isfinite(duration)) throw ConfigError("duration must be non-negative and finite");
  return static_cast<std::size_t>(std::llround(std::ceil(duration / dt - 1e-9)));
}

}  // namespace mmlab
