#include <cmath>

#include "cmetric/simd.hpp"

namespace cmetric::simd::scalar {

void adjacency_row(const double* xs, const double* ys, std::size_t n, std::size_t i, double mu, double* out) {
  const double xi = xs[i];
  const double yi = ys[i];
  for (std::size_t j = 0; j < n; ++j) {
    const double dx = xs[j] - xi;
    const double dy = ys[j] - yi;
    const double d = std::sqrt(dx * dx + dy * dy);
    out[j] = (d > 0.0 && d < mu) ? d : 0.0;
  }
}

void correlate(const double* values, std::size_t n, const double* coeffs, std::size_t w, double* out) {
  if (w == 0 || n < w) return;
  for (std::size_t i = 0; i + w <= n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < w; ++k) acc += coeffs[k] * values[i + k];
    out[i] = acc;
  }
}

}  // namespace cmetric::simd::scalar
