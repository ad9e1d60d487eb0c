#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cmetric/styles.hpp"

namespace cmetric {

struct AnnotatedEvent {
  AgentId agent_id;
  Style style = Style::overspeeding;
  std::vector<std::int64_t> annotator_frames;
  std::optional<double> expected_frame;

  // Explicit expected frame, else the annotator mean.
  double resolved_expected_frame() const;
};

struct AnnotationSet {
  std::optional<double> frame_rate_hz;
  std::vector<AnnotatedEvent> events;
};

// Arithmetic mean; empty input is a parameter error.
double expected_frame(std::span<const std::int64_t> annotator_frames);

double time_deviation_error(double t_sle, double expected, double frame_rate_hz);

struct TdeEntry {
  AgentId agent_id;
  Style style = Style::overspeeding;
  std::int64_t t_sle = 0;
  double expected_frame = 0.0;
  double tde_seconds = 0.0;
};

struct UnmatchedEvent {
  AgentId agent_id;
  Style style = Style::overspeeding;
  double expected_frame = 0.0;
};

struct StyleSummary {
  std::size_t matched = 0;
  std::size_t unmatched = 0;
  std::optional<double> mean_tde_seconds;
};

struct TdeResult {
  double frame_rate_hz = 10.0;
  std::vector<TdeEntry> matched;
  std::vector<UnmatchedEvent> unmatched;
  std::map<Style, StyleSummary> per_style;
};

// Pairs truth events with detections of the same (agent, style), nearest
// frames first, each detection used at most once.
TdeResult compute_tde(const StyleReport& report, const AnnotationSet& truth);

AnnotationSet annotations_from_json(std::string_view text);
std::string tde_to_json(const TdeResult& result, const Config& config);
// Fixed-width OS / OT/SLC / W table; "-" where nothing matched.
std::string tde_table(const TdeResult& result);

}  // namespace cmetric
