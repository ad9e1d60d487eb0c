#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cmetric/ingest.hpp"
#include "cmetric/styles.hpp"

namespace cmetric {

enum class ScenarioKind {
  conservative_platoon,
  overspeeding_pass,
  overtake_single,
  sudden_lane_change,
  weaving_sinusoid,
  mixed,
};

std::string_view to_string(ScenarioKind kind) noexcept;
std::optional<ScenarioKind> parse_scenario_kind(std::string_view text) noexcept;

// Geometry knobs. Their meaning depends on the kind; Scenario::defaults fills
// the values the detectors were calibrated against.
struct Scenario {
  ScenarioKind kind = ScenarioKind::conservative_platoon;
  int agents = 4;                  // total agent count
  int frames = 100;
  double frame_rate_hz = 10.0;
  std::uint64_t seed = 0;
  double lane_width = 3.5;         // m
  double mu = kDefaultMu;          // proximity the script is built around
  double spacing = 8.0;            // m between consecutive agents in a lane
  double speed = 10.0;             // m/s, background traffic
  double speed_fast = 20.0;        // m/s, the maneuvering agent
  double lateral_amplitude = 3.0;  // m
  int period_frames = 40;
  int oscillations = 3;
  int lane_change_frames = 10;
  double event_frame = 60.0;       // anchor frame of the scripted maneuver
  double jitter = 0.0;             // m, uniform positional noise, off by default

  static Scenario defaults(ScenarioKind kind);
  // Throws Error(parameter).
  void validate() const;
};

struct GroundTruthEvent {
  AgentId agent_id;
  Style style = Style::overspeeding;
  std::int64_t window_start = 0;
  std::int64_t window_end = 0;
  double expected_frame = 0.0;
};

struct SyntheticData {
  TrajectoryDataset dataset;
  std::vector<GroundTruthEvent> events;
};

SyntheticData generate(const Scenario& scenario);

std::string truth_to_json(const std::vector<GroundTruthEvent>& events, double frame_rate_hz);

}  // namespace cmetric
