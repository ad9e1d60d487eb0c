#include <doctest.h>

#include "cmetric/config.hpp"
#include "cmetric/error.hpp"

using namespace cmetric;

namespace {
ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::internal;
}
}  // namespace

TEST_CASE("json config") {
  const auto c = config_from_json(R"({"mu": 12.5, "window": 9, "thresholds": {"overspeed": 0.5}, "range": [10, 90]})");
  CHECK(c.mu == 12.5);
  CHECK(c.window == 9);
  CHECK(c.thresholds.overspeed == 0.5);
  CHECK(c.thresholds.overtake == Thresholds{}.overtake);
  REQUIRE(c.range);
  CHECK(c.range->second == 90);
  CHECK(config_from_json(config_to_json(c)).window == 9);
  CHECK(kind_of([] { config_from_json(R"({"mu": 10, "colour": 1})"); }) == ErrorKind::config);
  CHECK(kind_of([] { config_from_json("{"); }) == ErrorKind::config);
}

TEST_CASE("toml config") {
  const auto c = config_from_toml(
      "# comment\nmu = 8.0\nepsilon = 4\nframe_rate_hz = 30\n\n[thresholds]\nsharp_tol = 0.02 # inline\nmin_extrema = 3\n");
  CHECK(c.mu == 8.0);
  CHECK(c.epsilon == 4);
  CHECK(c.frame_rate_hz == 30.0);
  CHECK(c.thresholds.sharp_tol == 0.02);
  CHECK(c.thresholds.min_extrema == 3);
  CHECK(kind_of([] { config_from_toml("bogus = 1\n"); }) == ErrorKind::config);
  CHECK(kind_of([] { config_from_toml("mu = ten\n"); }) == ErrorKind::config);
}

TEST_CASE("validation") {
  Config c;
  CHECK_NOTHROW(c.validate());
  auto bad = [](auto mutate) {
    Config x;
    mutate(x);
    return kind_of([&] { x.validate(); });
  };
  CHECK(bad([](Config& x) { x.mu = 0; }) == ErrorKind::config);
  CHECK(bad([](Config& x) { x.window = 10; }) == ErrorKind::config);
  CHECK(bad([](Config& x) { x.window = 3; x.poly_degree = 2; }) == ErrorKind::config);
  CHECK(bad([](Config& x) { x.epsilon = 0; }) == ErrorKind::config);
  CHECK(bad([](Config& x) { x.frame_rate_hz = -1; }) == ErrorKind::config);
  CHECK(bad([](Config& x) { x.range = std::make_pair<std::int64_t, std::int64_t>(5, 2); }) == ErrorKind::config);
}
