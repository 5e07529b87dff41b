#if defined(__aarch64__)

#include <arm_neon.h>

#include <cstddef>

#include "airsweep/kernels.hpp"

// NEON variants (2 lanes). Explicit mul/add only, matching the scalar
// expression tree; reductions use the same (a0+a2)+(a1+a3) association via
// two 2-lane accumulators advanced 4 elements per iteration.

namespace airsweep::kernels {

namespace {

inline double diffuse_cell(const double* c, const double* up, const double* dn,
                           int j, int cols, double alpha, double decay) {
  const double l = (j > 0) ? c[j - 1] : c[j];
  const double r = (j + 1 < cols) ? c[j + 1] : c[j];
  const double lap = (l + r) + (up[j] + dn[j]) - 4.0 * c[j];
  return decay * (c[j] + alpha * lap);
}

void diffuse_neon(double* dst, const double* src, int rows, int cols,
                  double alpha, double decay) {
  const float64x2_t valpha = vdupq_n_f64(alpha);
  const float64x2_t vdecay = vdupq_n_f64(decay);
  const float64x2_t vfour = vdupq_n_f64(4.0);
  for (int i = 0; i < rows; ++i) {
    const double* up = src + static_cast<size_t>(i > 0 ? i - 1 : i) * cols;
    const double* dn = src + static_cast<size_t>(i + 1 < rows ? i + 1 : i) * cols;
    const double* c = src + static_cast<size_t>(i) * cols;
    double* out = dst + static_cast<size_t>(i) * cols;
    int j = 0;
    if (cols > 1) {
      out[0] = diffuse_cell(c, up, dn, 0, cols, alpha, decay);
      j = 1;
      for (; j + 2 <= cols - 1; j += 2) {
        const float64x2_t lr = vaddq_f64(vld1q_f64(c + j - 1), vld1q_f64(c + j + 1));
        const float64x2_t ud = vaddq_f64(vld1q_f64(up + j), vld1q_f64(dn + j));
        const float64x2_t cc = vld1q_f64(c + j);
        const float64x2_t lap = vsubq_f64(vaddq_f64(lr, ud), vmulq_f64(vfour, cc));
        const float64x2_t res = vmulq_f64(vdecay, vaddq_f64(cc, vmulq_f64(valpha, lap)));
        vst1q_f64(out + j, res);
      }
    }
    for (; j < cols; ++j) out[j] = diffuse_cell(c, up, dn, j, cols, alpha, decay);
  }
}

size_t sub_clamp_neon(double* dst, const double* a, const double* b, size_t n) {
  const float64x2_t zero = vdupq_n_f64(0.0);
  size_t clamped = 0;
  size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    const uint64x2_t pos = vcgtq_f64(d, zero);
    vst1q_f64(dst + i, vreinterpretq_f64_u64(vandq_u64(vreinterpretq_u64_f64(d), pos)));
    const uint64x2_t neg = vcltq_f64(d, zero);
    clamped += (vgetq_lane_u64(neg, 0) ? 1u : 0u) + (vgetq_lane_u64(neg, 1) ? 1u : 0u);
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

double sum_neon(const double* x, size_t n) {
  float64x2_t acc01 = vdupq_n_f64(0.0);  // lanes (a0, a1)
  float64x2_t acc23 = vdupq_n_f64(0.0);  // lanes (a2, a3)
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc01 = vaddq_f64(acc01, vld1q_f64(x + i));
    acc23 = vaddq_f64(acc23, vld1q_f64(x + i + 2));
  }
  const float64x2_t s = vaddq_f64(acc01, acc23);  // (a0+a2, a1+a3)
  double total = vgetq_lane_f64(s, 0) + vgetq_lane_f64(s, 1);
  for (; i < n; ++i) total += x[i];
  return total;
}

double sum_diff_neon(const double* a, const double* b, size_t n) {
  float64x2_t acc01 = vdupq_n_f64(0.0);
  float64x2_t acc23 = vdupq_n_f64(0.0);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc01 = vaddq_f64(acc01, vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    acc23 = vaddq_f64(acc23, vsubq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
  }
  const float64x2_t s = vaddq_f64(acc01, acc23);
  double total = vgetq_lane_f64(s, 0) + vgetq_lane_f64(s, 1);
  for (; i < n; ++i) total += a[i] - b[i];
  return total;
}

const Backend kNeon{"neon", diffuse_neon, sub_clamp_neon, sum_neon, sum_diff_neon};

}  // namespace

const Backend* neon_backend() { return &kNeon; }

}  // namespace airsweep::kernels

#endif  // __aarch64__
