// Built with -mavx2 only; never -mfma, so products and sums round separately
// exactly like the scalar reference.
#include <immintrin.h>

#include <cmath>

#include "cmetric/simd.hpp"

namespace cmetric::simd::avx2 {

void adjacency_row(const double* xs, const double* ys, std::size_t n, std::size_t i, double mu, double* out) {
  const __m256d xi = _mm256_set1_pd(xs[i]);
  const __m256d yi = _mm256_set1_pd(ys[i]);
  const __m256d vmu = _mm256_set1_pd(mu);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + j), xi);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + j), yi);
    const __m256d d = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
    const __m256d keep = _mm256_and_pd(_mm256_cmp_pd(d, zero, _CMP_GT_OQ), _mm256_cmp_pd(d, vmu, _CMP_LT_OQ));
    _mm256_storeu_pd(out + j, _mm256_and_pd(d, keep));
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
  for (; i + 4 <= m; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < w; ++k)
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(coeffs[k]), _mm256_loadu_pd(values + i + k)));
    _mm256_storeu_pd(out + i, acc);
  }
  if (i < m) scalar::correlate(values + i, n - i, coeffs, w, out + i);
}

}  // namespace cmetric::simd::avx2
