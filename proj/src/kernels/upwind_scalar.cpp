#include "mmlab/kernels/kernels.hpp"

namespace mmlab::kernels::scalar {

namespace {

inline double face_flux(double f_lo, double f_hi, double v_lo, double v_hi) {
  const double vf = 0.5 * (v_lo + v_hi);
  return vf > 0.0 ? vf * f_lo : vf * f_hi;
}

}  // namespace

void upwind_sweep(std::span<const double> field, std::span<const double> velocity,
                  std::size_t outer, std::size_t axis_len, std::size_t inner, double courant,
                  std::span<double> out) {
  const double* f = field.data();
  const double* v = velocity.data();
  for (std::size_t o = 0; o < outer; ++o) {
    const std::size_t base = o * axis_len * inner;
    for (std::size_t j = 0; j < inner; ++j) {
      double flux_lo = 0.0;
      for (std::size_t i = 0; i < axis_len; ++i) {
        const std::size_t at = base + i * inner + j;
        double flux_hi = 0.0;
        if (i + 1 < axis_len) flux_hi = face_flux(f[at], f[at + inner], v[at], v[at + inner]);
        out[at] = f[at] - courant * (flux_hi - flux_lo);
        flux_lo = flux_hi;
      }
    }
  }
}

}  // namespace mmlab::kernels::scalar
