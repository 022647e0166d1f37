#include <immintrin.h>

#include <vector>

#include "mmlab/kernels/kernels.hpp"

namespace mmlab::kernels::avx2 {

namespace {

inline __m256d face_flux(__m256d f_lo, __m256d f_hi, __m256d v_lo, __m256d v_hi) {
  const __m256d vf = _mm256_mul_pd(_mm256_set1_pd(0.5), _mm256_add_pd(v_lo, v_hi));
  const __m256d up = _mm256_cmp_pd(vf, _mm256_setzero_pd(), _CMP_GT_OQ);
  return _mm256_blendv_pd(_mm256_mul_pd(vf, f_hi), _mm256_mul_pd(vf, f_lo), up);
}

inline double face_flux(double f_lo, double f_hi, double v_lo, double v_hi) {
  const double vf = 0.5 * (v_lo + v_hi);
  return vf > 0.0 ? vf * f_lo : vf * f_hi;
}

// Contiguous axis: compute padded face fluxes, then difference them.
void sweep_contiguous(const double* f, const double* v, std::size_t len, double courant, double* out,
                      std::vector<double>& faces) {
  faces.assign(len + 1, 0.0);
  std::size_t k = 0;
  for (; k + 4 < len; k += 4) {
    const __m256d fl = _mm256_loadu_pd(f + k);
    const __m256d fh = _mm256_loadu_pd(f + k + 1);
    const __m256d vl = _mm256_loadu_pd(v + k);
    const __m256d vh = _mm256_loadu_pd(v + k + 1);
    _mm256_storeu_pd(faces.data() + k + 1, face_flux(fl, fh, vl, vh));
  }
  for (; k + 1 < len; ++k) faces[k + 1] = face_flux(f[k], f[k + 1], v[k], v[k + 1]);

  const __m256d c = _mm256_set1_pd(courant);
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    const __m256d lo = _mm256_loadu_pd(faces.data() + i);
    const __m256d hi = _mm256_loadu_pd(faces.data() + i + 1);
    const __m256d fi = _mm256_loadu_pd(f + i);
    _mm256_storeu_pd(out + i, _mm256_sub_pd(fi, _mm256_mul_pd(c, _mm256_sub_pd(hi, lo))));
  }
  for (; i < len; ++i) out[i] = f[i] - courant * (faces[i + 1] - faces[i]);
}

}  // namespace

void upwind_sweep(std::span<const double> field, std::span<const double> velocity,
                  std::size_t outer, std::size_t axis_len, std::size_t inner, double courant,
                  std::span<double> out) {
  const double* f = field.data();
  const double* v = velocity.data();
  double* dst = out.data();
  if (inner == 1) {
    std::vector<double> faces;
    for (std::size_t o = 0; o < outer; ++o) {
      const std::size_t base = o * axis_len;
      sweep_contiguous(f + base, v + base, axis_len, courant, dst + base, faces);
    }
    return;
  }
  const __m256d c = _mm256_set1_pd(courant);
  for (std::size_t o = 0; o < outer; ++o) {
    const std::size_t base = o * axis_len * inner;
    std::size_t j = 0;
    for (; j + 4 <= inner; j += 4) {
      __m256d flux_lo = _mm256_setzero_pd();
      for (std::size_t i = 0; i < axis_len; ++i) {
        const std::size_t at = base + i * inner + j;
        __m256d flux_hi = _mm256_setzero_pd();
        const __m256d fi = _mm256_loadu_pd(f + at);
        if (i + 1 < axis_len) {
          flux_hi = face_flux(fi, _mm256_loadu_pd(f + at + inner), _mm256_loadu_pd(v + at),
                              _mm256_loadu_pd(v + at + inner));
        }
        _mm256_storeu_pd(dst + at, _mm256_sub_pd(fi, _mm256_mul_pd(c, _mm256_sub_pd(flux_hi, flux_lo))));
        flux_lo = flux_hi;
      }
    }
    for (; j < inner; ++j) {
      double flux_lo = 0.0;
      for (std::size_t i = 0; i < axis_len; ++i) {
        const std::size_t at = base + i * inner + j;
        double flux_hi = 0.0;
        if (i + 1 < axis_len) flux_hi = face_flux(f[at], f[at + inner], v[at], v[at + inner]);
        dst[at] = f[at] - courant * (flux_hi - flux_lo);
        flux_lo = flux_hi;
      }
    }
  }
}

}  // namespace mmlab::kernels::avx2
