#include <atomic>
#include <cstdlib>
#include <string>

#include "mmlab/error.hpp"
#include "mmlab/kernels/kernels.hpp"

namespace mmlab::kernels {

namespace {

// -1: no override; otherwise the Isa value.
std::atomic<int> g_override{-1};

bool cpu_has_avx2() {
#if defined(MMLAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

std::optional<Isa> env_isa() {
  const char* env = std::getenv("MMLAB_ISA");
  if (env == nullptr) return std::nullopt;
  const std::string value(env);
  if (value == "scalar") return Isa::scalar;
  if (value == "avx2") return Isa::avx2;
  return std::nullopt;
}

Isa resolve(Isa requested) {
  if (requested == Isa::avx2 && !cpu_has_avx2()) return Isa::scalar;
  return requested;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

Isa detected_isa() {
  static const Isa best = cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
  return best;
}

Isa active_isa() {
  const int o = g_override.load(std::memory_order_relaxed);
  if (o >= 0) return resolve(static_cast<Isa>(o));
  static const std::optional<Isa> from_env = env_isa();
  if (from_env) return resolve(*from_env);
  return detected_isa();
}

void set_isa_override(std::optional<Isa> isa) {
  g_override.store(isa ? static_cast<int>(*isa) : -1, std::memory_order_relaxed);
}

void power_sums(std::span<const double> volumes, std::span<const double> values,
                std::span<double> volume_sums, std::span<double> value_sums) {
  if (volumes.size() != values.size() || volume_sums.size() != value_sums.size()) {
    throw ConfigError("power_sums: mismatched span sizes");
  }
#if defined(MMLAB_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::power_sums(volumes, values, volume_sums, value_sums);
#endif
  scalar::power_sums(volumes, values, volume_sums, value_sums);
}

void upwind_sweep(std::span<const double> field, std::span<const double> velocity,
                  std::size_t outer, std::size_t axis_len, std::size_t inner, double courant,
                  std::span<double> out) {
  const std::size_t n = outer * axis_len * inner;
  if (field.size() != n || velocity.size() != n || out.size() != n) {
    throw ConfigError("upwind_sweep: span sizes do not match the block shape");
  }
#if defined(MMLAB_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::upwind_sweep(field, velocity, outer, axis_len, inner, courant, out);
#endif
  scalar::upwind_sweep(field, velocity, outer, axis_len, inner, courant, out);
}

}  // namespace mmlab::kernels
