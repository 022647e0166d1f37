#pragma once

#include <array>
#include <cstdint>

namespace mmlab {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). The output
// block is a pure function of (counter, key), so any event's random numbers
// can be regenerated from its coordinates alone.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

// Random numbers for one (seed, stream, index) coordinate. Successive draws
// walk the fourth counter word; each block yields two uniforms.
class CounterRng {
public:
  CounterRng(std::uint64_t seed, std::uint32_t stream, std::uint64_t index);

  // Uniform on the open interval (0, 1) with 53-bit resolution.
  double uniform();
  // Standard normal by the Box-Muller transform (both outputs used).
  double normal();
  // Exponential with the given rate > 0.
  double exponential(double rate);

private:
  PhiloxKey key_;
  PhiloxCounter counter_;
  std::array<std::uint32_t, 4> block_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mmlab
