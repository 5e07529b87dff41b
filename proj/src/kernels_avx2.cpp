#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cstddef>

#include "airsweep/kernels.hpp"

// AVX2 variants. Explicit mul/add only (no FMA), mirroring the scalar
// expression tree lane for lane.

namespace airsweep::kernels {

namespace {

inline double diffuse_cell(const double* c, const double* up, const double* dn,
                           int j, int cols, double alpha, double decay) {
  const double l = (j > 0) ? c[j - 1] : c[j];
  const double r = (j + 1 < cols) ? c[j + 1] : c[j];
  const double lap = (l + r) + (up[j] + dn[j]) - 4.0 * c[j];
  return decay * (c[j] + alpha * lap);
}

void diffuse_avx2(double* dst, const double* src, int rows, int cols,
                  double alpha, double decay) {
  const __m256d valpha = _mm256_set1_pd(alpha);
  const __m256d vdecay = _mm256_set1_pd(decay);
  const __m256d vfour = _mm256_set1_pd(4.0);
  for (int i = 0; i < rows; ++i) {
    const double* up = src + static_cast<size_t>(i > 0 ? i - 1 : i) * cols;
    const double* dn = src + static_cast<size_t>(i + 1 < rows ? i + 1 : i) * cols;
    const double* c = src + static_cast<size_t>(i) * cols;
    double* out = dst + static_cast<size_t>(i) * cols;
    int j = 0;
    if (cols > 1) {
      out[0] = diffuse_cell(c, up, dn, 0, cols, alpha, decay);
      j = 1;
      for (; j + 4 <= cols - 1; j += 4) {
        const __m256d lr = _mm256_add_pd(_mm256_loadu_pd(c + j - 1), _mm256_loadu_pd(c + j + 1));
        const __m256d ud = _mm256_add_pd(_mm256_loadu_pd(up + j), _mm256_loadu_pd(dn + j));
        const __m256d cc = _mm256_loadu_pd(c + j);
        const __m256d lap = _mm256_sub_pd(_mm256_add_pd(lr, ud), _mm256_mul_pd(vfour, cc));
        const __m256d res = _mm256_mul_pd(vdecay, _mm256_add_pd(cc, _mm256_mul_pd(valpha, lap)));
        _mm256_storeu_pd(out + j, res);
      }
    }
    for (; j < cols; ++j) out[j] = diffuse_cell(c, up, dn, j, cols, alpha, decay);
  }
}

size_t sub_clamp_avx2(double* dst, const double* a, const double* b, size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  size_t clamped = 0;
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const __m256d pos = _mm256_cmp_pd(d, zero, _CMP_GT_OQ);
    _mm256_storeu_pd(dst + i, _mm256_and_pd(d, pos));
    const __m256d neg = _mm256_cmp_pd(d, zero, _CMP_LT_OQ);
    clamped += static_cast<size_t>(__builtin_popcount(_mm256_movemask_pd(neg)));
  }
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    if (d > 0.0) {
      dst[i] = d;
    } else {
      dst[i] = 0.0;
      if (d < 0.0) ++clamped;
    }
  }
  return clamped;
}

inline double hsum4(__m256d acc) {
  const __m128d lo = _mm256_castpd256_pd128(acc);       // (a0, a1)
  const __m128d hi = _mm256_extractf128_pd(acc, 1);     // (a2, a3)
  const __m128d s = _mm_add_pd(lo, hi);                 // (a0+a2, a1+a3)
  return _mm_cvtsd_f64(s) + _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
}

double sum_avx2(const double* x, size_t n) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double total = hsum4(acc);
  for (; i < n; ++i) total += x[i];
  return total;
}

double sum_diff_avx2(const double* a, const double* b, size_t n) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  double total = hsum4(acc);
  for (; i < n; ++i) total += a[i] - b[i];
  return total;
}

const Backend kAvx2{"avx2", diffuse_avx2, sub_clamp_avx2, sum_avx2, sum_diff_avx2};

}  // namespace

const Backend* avx2_backend() { return &kAvx2; }

}  // namespace airsweep::kernels

#endif  // x86_64
