#include "airsweep/kernels.hpp"

#include <cstdlib>

namespace airsweep::kernels {

namespace {

void diffuse_scalar(double* dst, const double* src, int rows, int cols,
                    double alpha, double decay) {
  for (int i = 0; i < rows; ++i) {
    const double* up = src + static_cast<size_t>(i > 0 ? i - 1 : i) * cols;
    const double* dn = src + static_cast<size_t>(i + 1 < rows ? i + 1 : i) * cols;
    const double* c = src + static_cast<size_t>(i) * cols;
    double* out = dst + static_cast<size_t>(i) * cols;
    for (int j = 0; j < cols; ++j) {
      const double l = (j > 0) ? c[j - 1] : c[j];
      const double r = (j + 1 < cols) ? c[j + 1] : c[j];
      const double lap = (l + r) + (up[j] + dn[j]) - 4.0 * c[j];
      out[j] = decay * (c[j] + alpha * lap);
    }
  }
}

size_t sub_clamp_scalar(double* dst, const double* a, const double* b, size_t n) {
  size_t clamped = 0;
  for (size_t i = 0; i < n; ++i) {
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

double sum_scalar(const double* x, size_t n) {
  double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    a0 += x[i];
    a1 += x[i + 1];
    a2 += x[i + 2];
    a3 += x[i + 3];
  }
  double total = (a0 + a2) + (a1 + a3);
  for (; i < n; ++i) total += x[i];
  return total;
}

double sum_diff_scalar(const double* a, const double* b, size_t n) {
  double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    a0 += a[i] - b[i];
    a1 += a[i + 1] - b[i + 1];
    a2 += a[i + 2] - b[i + 2];
    a3 += a[i + 3] - b[i + 3];
  }
  double total = (a0 + a2) + (a1 + a3);
  for (; i < n; ++i) total += a[i] - b[i];
  return total;
}

const Backend kScalar{"scalar", diffuse_scalar, sub_clamp_scalar, sum_scalar, sum_diff_scalar};

const Backend* pick_default() {
  if (const char* env = std::getenv("AIRSWEEP_KERNELS")) {
    const std::string want(env);
    if (want == "scalar") return &kScalar;
#if defined(__x86_64__) || defined(_M_X64)
    if (want == "avx2" && avx2_backend()) return avx2_backend();
#endif
#if defined(__aarch64__)
    if (want == "neon" && neon_backend()) return neon_backend();
#endif
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (const Backend* b = avx2_backend()) {
    if (__builtin_cpu_supports("avx2")) return b;
  }
#endif
#if defined(__aarch64__)
  if (const Backend* b = neon_backend()) return b;
#endif
  return &kScalar;
}

const Backend* g_active = nullptr;

}  // namespace

const Backend& scalar_backend() { return kScalar; }

const Backend& active() {
  if (!g_active) g_active = pick_default();
  return *g_active;
}

bool select(const std::string& name) {
  if (name == "scalar") {
    g_active = &kScalar;
    return true;
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (name == "avx2" && avx2_backend() && __builtin_cpu_supports("avx2")) {
    g_active = avx2_backend();
    return true;
  }
#endif
#if defined(__aarch64__)
  if (name == "neon" && neon_backend()) {
    g_active = neon_backend();
    return true;
  }
#endif
  return false;
}

}  // namespace airsweep::kernels
