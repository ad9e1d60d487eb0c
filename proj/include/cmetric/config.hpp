#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "cmetric/graph.hpp"
#include "cmetric/ingest.hpp"

namespace cmetric {

struct Thresholds {
  double overspeed = 1.0;    // SLE_1, new neighbours per second
  double overtake = 0.05;    // SLE_0, 1/(m s)
  double sharp_tol = 0.015;  // weaving extremum sharpness
  double zero_tol = 1e-3;
  int min_extrema = 2;
};

struct Config {
  double mu = kDefaultMu;
  int window = 11;
  int poly_degree = 2;
  int epsilon = 5;
  double frame_rate_hz = kDefaultFrameRateHz;
  std::size_t n_max = kDefaultNMax;
  Thresholds thresholds;
  // Optional analysis restriction to frames [first, second].
  std::optional<std::pair<std::int64_t, std::int64_t>> range;

  // Throws Error(config) on the first invalid field.
  void validate() const;
};

// Applies the keys present in a JSON or TOML document on top of `base`.
// Accepted keys mirror the report's "parameters" block.
Config config_from_json(std::string_view text, Config base = {});
Config config_from_toml(std::string_view text, Config base = {});
// Chooses the parser by extension (.json, .toml).
Config load_config_file(const std::string& path, Config base = {});

std::string config_to_json(const Config& config);

}  // namespace cmetric
