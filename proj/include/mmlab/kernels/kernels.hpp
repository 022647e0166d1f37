#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference
// implementation and, where the target supports it, an AVX2 variant that is
// selected at runtime. The variants are equivalence-tested against the
// reference (tests/test_kernels.cpp).

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace mmlab::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

// Best instruction set compiled in and supported by the running CPU.
Isa detected_isa();

// Instruction set used by the dispatching entry points: the override when
// set, else MMLAB_ISA from the environment ("scalar" or "avx2"), else detected_isa().
Isa active_isa();
void set_isa_override(std::optional<Isa> isa);

// Leaf size of the pairwise (tree) summation used by power_sums.
inline constexpr std::size_t kPairwiseLeaf = 64;

// For n = 1..max_degree (max_degree = volume_sums.size() = value_sums.size()):
//   volume_sums[n-1] = sum_i volumes[i]^n,  value_sums[n-1] = sum_i values[i]^n.
// Powers are formed by repeated multiplication; summation is pairwise over
// blocks of kPairwiseLeaf elements. The sum for degree n does not depend on
// max_degree.
void power_sums(std::span<const double> volumes, std::span<const double> values,
                std::span<double> volume_sums, std::span<double> value_sums);

// One first-order upwind finite-volume update along a single axis of a dense
// row-major block laid out as [outer][axis_len][inner]. `velocity` holds the
// axis component at cell centres; face velocities are the mean of the two
// adjacent cells and the two boundary faces carry zero flux. `courant` is dt/h.
//   out[i] = field[i] - courant * (F[i+1/2] - F[i-1/2])
// Scalar and AVX2 variants perform identical operations and agree bit-for-bit.
void upwind_sweep(std::span<const double> field, std::span<const double> velocity,
                  std::size_t outer, std::size_t axis_len, std::size_t inner, double courant,
                  std::span<double> out);

namespace scalar {
void power_sums(std::span<const double> volumes, std::span<const double> values,
                std::span<double> volume_sums, std::span<double> value_sums);
void upwind_sweep(std::span<const double> field, std::span<const double> velocity,
                  std::size_t outer, std::size_t axis_len, std::size_t inner, double courant,
                  std::span<double> out);
}  // namespace scalar

#if defined(MMLAB_HAVE_AVX2)
namespace avx2 {
void power_sums(std::span<const double> volumes, std::span<const double> values,
                std::span<double> volume_sums, std::span<double> value_sums);
void upwind_sweep(std::span<const double> field, std::span<const double> velocity,
                  std::size_t outer, std::size_t axis_len, std::size_t inner, double courant,
                  std::span<double> out);
}  // namespace avx2
#endif

}  // namespace mmlab::kernels
