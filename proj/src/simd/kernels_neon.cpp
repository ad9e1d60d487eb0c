#include <arm_neon.h>

#include <cmath>

#include "cmetric/simd.hpp"

namespace cmetric::simd::neon {

void adjacency_row(const double* xs, const double* ys, std::size_t n, std::size_t i, double mu, double* out) {
  const float64x2_t xi = vdupq_n_f64(xs[i]);
  const float64x2_t yi = vdupq_n_f64(ys[i]);
  const float64x2_t vmu = vdupq_n_f64(mu);
  const float64x2_t zero = vdupq_n_f64(0.0);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const float64x2_t dx = vsubq_f64(vld1q_f64(xs + j), xi);
    const float64x2_t dy = vsubq_f64(vld1q_f64(ys + j), yi);
    const float64x2_t d = vsqrtq_f64(vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy)));
    const uint64x2_t keep = vandq_u64(vcgtq_f64(d, zero), vcltq_f64(d, vmu));
    vst1q_f64(out + j, vbslq_f64(keep, d, zero));
  }
  for (; j < n; ++j) {
    const double dx = xs[j] - xs[i];
    const double dy = ys[j] - ys[i];
    const double d = std::sqrt(dx * dx + dy * dy);
    out[j] = (d > 0.0 && d < mu) ? d : 0.0;
  }
}

void correlate(const double* values, std::size_t n, const double* coeffs, std::size_t w, double* out) {
  if (w == 0 || n < w) return;
  const std::size_t m = n - w + 1;
  std::size_t i = 0;
  for (; i + 2 <= m; i += 2) {
    float64x2_t acc = vdupq_n_f64(0.0);
    // vmulq + vaddq, not vfmaq: keeps rounding identical to the scalar path.
    for (std::size_t k = 0; k < w; ++k) acc = vaddq_f64(acc, vmulq_f64(vdupq_n_f64(coeffs[k]), vld1q_f64(values + i + k)));
    vst1q_f64(out + i, acc);
  }
  if (i < m) scalar::correlate(values + i, n - i, coeffs, w, out + i);
}

}  // namespace cmetric::simd::neon
