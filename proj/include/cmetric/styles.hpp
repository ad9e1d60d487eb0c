#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cmetric/centrality.hpp"
#include "cmetric/config.hpp"
#include "cmetric/signal.hpp"

namespace cmetric {

enum class Style {
  overspeeding,
  overtaking_or_sudden_lane_change,
  weaving,
  conservative_uniform_speed,
  conservative_no_lane_change,
};

std::string_view to_string(Style style) noexcept;
std::optional<Style> parse_style(std::string_view text) noexcept;
bool is_aggressive(Style style) noexcept;

struct StyleDetection {
  AgentId agent_id;
  Style style = Style::overspeeding;
  std::int64_t t_sle = 0;
  double sle_max = 0.0;
  double sie_at_t = 0.0;  // intensity
  std::vector<ExtremePoint> evidence;
};

std::optional<StyleDetection> detect_overspeeding(const SmoothedSeries& degree, const Thresholds& th);
std::optional<StyleDetection> detect_overtaking(const SmoothedSeries& closeness, const Thresholds& th);
std::optional<StyleDetection> detect_weaving(const SmoothedSeries& closeness, int epsilon, const Thresholds& th);
// Either nothing or one detection per flat row: uniform speed (degree row)
// and no lane change (closeness row).
std::vector<StyleDetection> detect_conservative(const SmoothedSeries& closeness, const SmoothedSeries& degree,
                                                int epsilon, const Thresholds& th);

enum class GlobalBehavior { aggressive, conservative, neutral };

std::string_view to_string(GlobalBehavior behavior) noexcept;

struct AgentReport {
  AgentId agent_id;
  GlobalBehavior global_behavior = GlobalBehavior::neutral;
  bool insufficient_data = false;
  std::vector<StyleDetection> detections;
};

struct StyleReport {
  Config parameters;
  std::vector<AgentReport> agents;

  const AgentReport* find(const AgentId& id) const noexcept;
};

GlobalBehavior global_behavior_of(const std::vector<StyleDetection>& detections) noexcept;

struct AgentSignals {
  SmoothedSeries closeness;
  SmoothedSeries degree;
};

AgentSignals smooth_series(const CentralitySeries& series, const Config& config);
AgentReport classify_agent(const CentralitySeries& series, const Config& config);
StyleReport classify(const TrajectoryDataset& ds, const Config& config);

inline constexpr int kReportSchema = 1;

std::string report_to_json(const StyleReport& report);
StyleReport report_from_json(std::string_view text);

}  // namespace cmetric
