#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

// Hot numeric kernels with a scalar reference and vector variants chosen at
// runtime. All variants are bit-identical to the scalar code: no fused
// multiply-add, same per-output accumulation order.
namespace cmetric::simd {

enum class Isa { scalar, avx2, neon };

std::string_view name(Isa isa) noexcept;
std::optional<Isa> parse_isa(std::string_view text) noexcept;
bool supported(Isa isa) noexcept;
// Best supported variant, or the one named by CMETRIC_ISA when set and usable.
Isa detected() noexcept;
Isa active() noexcept;
// Throws cmetric::Error(parameter) when the variant is not usable here.
void set_active(Isa isa);

// out[j] = d(i, j) if 0 < d(i, j) < mu else 0, where d is Euclidean distance.
void adjacency_row(const double* xs, const double* ys, std::size_t n, std::size_t i, double mu, double* out);

// out[i] = sum_k coeffs[k] * values[i + k] for i in [0, n - w], summed in k order.
void correlate(const double* values, std::size_t n, const double* coeffs, std::size_t w, double* out);

namespace scalar {
void adjacency_row(const double* xs, const double* ys, std::size_t n, std::size_t i, double mu, double* out);
void correlate(const double* values, std::size_t n, const double* coeffs, std::size_t w, double* out);
}  // namespace scalar

#if defined(CMETRIC_HAVE_AVX2)
namespace avx2 {
void adjacency_row(const double* xs, const double* ys, std::size_t n, std::size_t i, double mu, double* out);
void correlate(const double* values, std::size_t n, const double* coeffs, std::size_t w, double* out);
}  // namespace avx2
#endif

#if defined(CMETRIC_HAVE_NEON)
namespace neon {
void adjacency_row(const double* xs, const double* ys, std::size_t n, std::size_t i, double mu, double* out);
void correlate(const double* values, std::size_t n, const double* coeffs, std::size_t w, double* out);
}  // namespace neon
#endif

}  // namespace cmetric::simd
