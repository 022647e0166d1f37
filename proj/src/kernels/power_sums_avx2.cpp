#include <immintrin.h>


#include "power_sums_impl.hpp"

namespace mmlab::kernels::avx2 {

namespace {

constexpr std::size_t kMaxLaneDegree = 32;

double hsum(__m256d v) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, v);
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

void leaf(const double* u, const double* c, std::size_t n, std::size_t degree, double* su, double* sc) {
  __m256d acc_u[kMaxLaneDegree];
  __m256d acc_c[kMaxLaneDegree];
  for (std::size_t d = 0; d < degree; ++d) {
    acc_u[d] = _mm256_setzero_pd();
    acc_c[d] = _mm256_setzero_pd();
  }
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vu = _mm256_loadu_pd(u + i);
    const __m256d vc = _mm256_loadu_pd(c + i);
    __m256d pu = vu;
    __m256d pc = vc;
    for (std::size_t d = 0; d < degree; ++d) {
      acc_u[d] = _mm256_add_pd(acc_u[d], pu);
      acc_c[d] = _mm256_add_pd(acc_c[d], pc);
      pu = _mm256_mul_pd(pu, vu);
      pc = _mm256_mul_pd(pc, vc);
    }
  }
  for (std::size_t d = 0; d < degree; ++d) {
    su[d] = hsum(acc_u[d]);
    sc[d] = hsum(acc_c[d]);
  }
  for (; i < n; ++i) {
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
  if (volume_sums.size() > kMaxLaneDegree) {
    return scalar::power_sums(volumes, values, volume_sums, value_sums);
  }
  detail::run_power_sums(volumes, values, volume_sums, value_sums, leaf);
}

}  // namespace mmlab::kernels::avx2
