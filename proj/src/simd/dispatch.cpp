#include <atomic>
#include <cstdlib>
#include <string>

#include "cmetric/error.hpp"
#include "cmetric/simd.hpp"

namespace cmetric::simd {

namespace {

struct Table {
  Isa isa;
  void (*adjacency_row)(const double*, const double*, std::size_t, std::size_t, double, double*);
  void (*correlate)(const double*, std::size_t, const double*, std::size_t, double*);
};

constexpr Table kScalar{Isa::scalar, &scalar::adjacency_row, &scalar::correlate};
#if defined(CMETRIC_HAVE_AVX2)
constexpr Table kAvx2{Isa::avx2, &avx2::adjacency_row, &avx2::correlate};
#endif
#if defined(CMETRIC_HAVE_NEON)
constexpr Table kNeon{Isa::neon, &neon::adjacency_row, &neon::correlate};
#endif

const Table* table_for(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return &kScalar;
    case Isa::avx2:
#if defined(CMETRIC_HAVE_AVX2)
      return &kAvx2;
#else
      return nullptr;
#endif
    case Isa::neon:
#if defined(CMETRIC_HAVE_NEON)
      return &kNeon;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

std::atomic<const Table*>& current() {
  static std::atomic<const Table*> t{table_for(detected())};
  return t;
}

}  // namespace

std::string_view name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "scalar";
}

std::optional<Isa> parse_isa(std::string_view text) noexcept {
  for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon})
    if (name(isa) == text) return isa;
  return std::nullopt;
}

bool supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(CMETRIC_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
#if defined(CMETRIC_HAVE_NEON)
      return true;  // baseline on AArch64
#else
      return false;
#endif
  }
  return false;
}

Isa detected() noexcept {
  if (const char* env = std::getenv("CMETRIC_ISA")) {
    if (auto isa = parse_isa(env); isa && supported(*isa)) return *isa;
  }
  if (supported(Isa::avx2)) return Isa::avx2;
  if (supported(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

Isa active() noexcept { return current().load(std::memory_order_acquire)->isa; }

void set_active(Isa isa) {
  if (!supported(isa)) throw Error(ErrorKind::parameter, "SIMD variant '" + std::string(name(isa)) + "' is not available");
  current().store(table_for(isa), std::memory_order_release);
}

void adjacency_row(const double* xs, const double* ys, std::size_t n, std::size_t i, double mu, double* out) {
  current().load(std::memory_order_acquire)->adjacency_row(xs, ys, n, i, mu, out);
}

void correlate(const double* values, std::size_t n, const double* coeffs, std::size_t w, double* out) {
  current().load(std::memory_order_acquire)->correlate(values, n, coeffs, w, out);
}

}  // namespace cmetric::simd
