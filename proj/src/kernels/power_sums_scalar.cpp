#include "power_sums_impl.hpp"

namespace mmlab::kernels::scalar {

namespace {

void leaf(const double* u, const double* c, std::size_t n, std::size_t degree, double* su, double* sc) {
  for (std::size_t d = 0; d < degree; ++d) su[d] = sc[d] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double pu = u[i];
    double pc = c[i];
    for (std::size_t d = 0; d < degree; ++d) {
      su[d] += pu;
      sc[d] += pc;
      pu *= u[i];
      pc *= c[i];
    }
  }
}

}  // namespace

void power_sums(std::span<const double> volumes, std::span<const double> values,
                std::span<double> volume_sums, std::span<double> value_sums) {
  detail::run_power_sums(volumes, values, volume_sums, value_sums, leaf);
}

}  // namespace mmlab::kernels::scalar
