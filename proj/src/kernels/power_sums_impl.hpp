#pragma once

// Shared pairwise driver for the power_sums variants. Only the leaf differs
// between scalar and SIMD builds; the split points are identical.

#include <cstddef>
#include <vector>

#include "mmlab/kernels/kernels.hpp"

namespace mmlab::kernels::detail {

template <class Leaf>
void pairwise_power_sums(const double* u, const double* c, std::size_t n, std::size_t degree,
                         double* su, double* sc, double* scratch, Leaf&& leaf) {
  if (n <= kPairwiseLeaf) {
    leaf(u, c, n, degree, su, sc);
    return;
  }
  const std::size_t half = n / 2;
  double* right_u = scratch;
  double* right_c = scratch + degree;
  double* deeper = scratch + 2 * degree;
  pairwise_power_sums(u, c, half, degree, su, sc, deeper, leaf);
  pairwise_power_sums(u + half, c + half, n - half, degree, right_u, right_c, deeper, leaf);
  for (std::size_t d = 0; d < degree; ++d) {
    su[d] += right_u[d];
    sc[d] += right_c[d];
  }
}

// Scratch needed for n elements: two degree-sized rows per tree level.
inline std::size_t pairwise_scratch_size(std::size_t n, std::size_t degree) {
  std::size_t levels = 1;
  while (n > kPairwiseLeaf) {
    n = n - n / 2;
    ++levels;
  }
  return 2 * degree * levels;
}

template <class Leaf>
void run_power_sums(std::span<const double> volumes, std::span<const double> values,
                    std::span<double> volume_sums, std::span<double> value_sums, Leaf&& leaf) {
  const std::size_t degree = volume_sums.size();
  for (std::size_t d = 0; d < degree; ++d) volume_sums[d] = value_sums[d] = 0.0;
  if (degree == 0 || volumes.empty()) return;
  std::vector<double> scratch(pairwise_scratch_size(volumes.size(), degree));
  pairwise_power_sums(volumes.data(), values.data(), volumes.size(), degree, volume_sums.data(),
                      value_sums.data(), scratch.data(), leaf);
}

}  // namespace mmlab::kernels::detail
