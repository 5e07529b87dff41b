#pragma once

#include <cstddef>
#include <string>

// Hot array kernels behind a runtime-dispatched backend table. Every backend
// evaluates the same expression tree elementwise and uses the same blocked
// 4-accumulator association for reductions, so results are bit-identical
// across backends (kernel TUs are built with -ffp-contract=off).

namespace airsweep::kernels {

// One substep of the decayed-diffusion stencil on a rows x cols grid:
//   dst[i] = decay * (src[i] + alpha * lap5(src)[i])
// lap5 is the 5-point Laplacian with reflecting walls (a missing neighbor
// reads the center value), alpha = k_d * dt / h^2 premultiplied.
using DiffuseFn = void (*)(double* dst, const double* src, int rows, int cols,
                           double alpha, double decay);

// dst[i] = a[i] - b[i] clamped at 0; returns the number of clamped cells.
using SubClampFn = size_t (*)(double* dst, const double* a, const double* b, size_t n);

// Blocked 4-accumulator sum of x, and of (a[i] - b[i]).
using SumFn = double (*)(const double* x, size_t n);
using SumDiffFn = double (*)(const double* a, const double* b, size_t n);

struct Backend {
  const char* name;
  DiffuseFn diffuse;
  SubClampFn sub_clamp;
  SumFn sum;
  SumDiffFn sum_diff;
};

const Backend& scalar_backend();
#if defined(__AVX2__) || defined(__x86_64__) || defined(_M_X64)
const Backend* avx2_backend();  // null when unavailable at build time
#endif
#if defined(__aarch64__)
const Backend* neon_backend();
#endif

// Backend picked once per process from CPU features; the AIRSWEEP_KERNELS
// environment variable (scalar|avx2|neon) or select() overrides it. select()
// is intended for test setup, not for calls concurrent with stepping.
const Backend& active();
bool select(const std::string& name);

}  // namespace airsweep::kernels
