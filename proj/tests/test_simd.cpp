#include <doctest.h>

#include <cstring>
#include <vector>

#include "cmetric/error.hpp"
#include "cmetric/simd.hpp"
#include "cmetric/styles.hpp"
#include "cmetric/synth.hpp"
#include "oracles.hpp"

using namespace cmetric;

namespace {
bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

struct Restore {
  simd::Isa was = simd::active();
  ~Restore() { simd::set_active(was); }
};
}  // namespace

TEST_CASE("every usable variant is bit-identical to scalar") {
  Restore guard;
  oracle::Rng rng(5);
  for (auto isa : {simd::Isa::avx2, simd::Isa::neon}) {
    if (!simd::supported(isa)) {
      MESSAGE("skipping " << simd::name(isa) << ": not available on this machine");
      continue;
    }
    simd::set_active(isa);
    for (std::size_t n = 1; n < 70; ++n) {
      std::vector<double> xs(n), ys(n);
      for (std::size_t k = 0; k < n; ++k) {
        xs[k] = rng.uniform(0, 40);
        ys[k] = rng.uniform(0, 40);
      }
      if (n > 3) xs[3] = xs[0], ys[3] = ys[0];  // coincident pair
      for (std::size_t i = 0; i < n; i += 3) {
        std::vector<double> ref(n), got(n);
        simd::scalar::adjacency_row(xs.data(), ys.data(), n, i, 15.0, ref.data());
        simd::adjacency_row(xs.data(), ys.data(), n, i, 15.0, got.data());
        CHECK(same_bits(ref, got));
      }
      for (std::size_t w : {3u, 5u, 11u}) {
        if (w > n) continue;
        std::vector<double> coeffs(w);
        for (auto& c : coeffs) c = rng.uniform(-1, 1);
        std::vector<double> ref(n - w + 1), got(n - w + 1);
        simd::scalar::correlate(xs.data(), n, coeffs.data(), w, ref.data());
        simd::correlate(xs.data(), n, coeffs.data(), w, got.data());
        CHECK(same_bits(ref, got));
      }
    }
  }
}

TEST_CASE("reports do not depend on the selected variant") {
  Restore guard;
  const auto data = generate(Scenario::defaults(ScenarioKind::mixed));
  simd::set_active(simd::Isa::scalar);
  const auto ref = report_to_json(classify(data.dataset, Config{}));
  for (auto isa : {simd::Isa::avx2, simd::Isa::neon}) {
    if (!simd::supported(isa)) continue;
    simd::set_active(isa);
    CHECK(report_to_json(classify(data.dataset, Config{})) == ref);
  }
}

TEST_CASE("selection") {
  Restore guard;
  CHECK(simd::supported(simd::Isa::scalar));
  CHECK(simd::parse_isa("avx2") == simd::Isa::avx2);
  CHECK_FALSE(simd::parse_isa("sse9"));
  for (auto isa : {simd::Isa::avx2, simd::Isa::neon})
    if (!simd::supported(isa)) CHECK_THROWS_AS(simd::set_active(isa), Error);
}
