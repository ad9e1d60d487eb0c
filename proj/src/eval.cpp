#include "cmetric/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <tuple>

#include "cmetric/error.hpp"
#include "json_support.hpp"

namespace cmetric {

double expected_frame(std::span<const std::int64_t> annotator_frames) {
  if (annotator_frames.empty()) throw Error(ErrorKind::parameter, "no annotator frames");
  double sum = 0.0;
  for (auto f : annotator_frames) sum += static_cast<double>(f);
  return sum / static_cast<double>(annotator_frames.size());
}

double AnnotatedEvent::resolved_expected_frame() const {
  if (expected_frame) return *expected_frame;
  return cmetric::expected_frame(annotator_frames);
}

double time_deviation_error(double t_sle, double expected, double frame_rate_hz) {
  if (!(frame_rate_hz > 0.0)) throw Error(ErrorKind::config, "frame rate must be positive");
  return std::abs(t_sle - expected) / frame_rate_hz;
}

TdeResult compute_tde(const StyleReport& report, const AnnotationSet& truth) {
  const double f = report.parameters.frame_rate_hz;
  if (truth.frame_rate_hz && *truth.frame_rate_hz != f)
    throw Error(ErrorKind::config, "report frame rate differs from the truth frame rate");
  TdeResult result;
  result.frame_rate_hz = f;

  const std::size_t n = truth.events.size();
  std::vector<double> expected(n);
  for (std::size_t i = 0; i < n; ++i) expected[i] = truth.events[i].resolved_expected_frame();

  std::vector<const StyleDetection*> detections;
  for (const auto& a : report.agents)
    for (const auto& d : a.detections) detections.push_back(&d);

  // Greedy over all same-(agent, style) pairs, smallest deviation first.
  std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < detections.size(); ++j)
      if (detections[j]->agent_id == truth.events[i].agent_id && detections[j]->style == truth.events[i].style)
        pairs.emplace_back(std::abs(static_cast<double>(detections[j]->t_sle) - expected[i]), i, j);
  std::sort(pairs.begin(), pairs.end());
  std::vector<std::optional<std::size_t>> match(n);
  std::vector<char> used(detections.size(), 0);
  for (const auto& [dev, i, j] : pairs) {
    if (match[i] || used[j]) continue;
    match[i] = j;
    used[j] = 1;
  }

  std::map<Style, double> sums;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& e = truth.events[i];
    auto& summary = result.per_style[e.style];
    if (!match[i]) {
      result.unmatched.push_back({e.agent_id, e.style, expected[i]});
      ++summary.unmatched;
      continue;
    }
    const auto* d = detections[*match[i]];
    const double tde = time_deviation_error(static_cast<double>(d->t_sle), expected[i], f);
    result.matched.push_back({e.agent_id, e.style, d->t_sle, expected[i], tde});
    ++summary.matched;
    sums[e.style] += tde;
  }
  for (auto& [style, summary] : result.per_style)
    if (summary.matched > 0) summary.mean_tde_seconds = sums[style] / static_cast<double>(summary.matched);
  return result;
}

AnnotationSet annotations_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::parse, e.what());
  }
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorKind::validation, "truth: " + what);
  };
  require(doc.is_object() && doc.contains("events") && doc["events"].is_array(), "expected an object with an 'events' array");
  AnnotationSet set;
  if (doc.contains("frame_rate_hz")) {
    require(doc["frame_rate_hz"].is_number() && doc["frame_rate_hz"].get<double>() > 0.0, "frame_rate_hz must be positive");
    set.frame_rate_hz = doc["frame_rate_hz"].get<double>();
  }
  for (const auto& je : doc["events"]) {
    require(je.is_object() && je.contains("agent_id") && je.contains("style"), "event needs agent_id and style");
    AnnotatedEvent e;
    e.agent_id = detail::agent_from(je["agent_id"]);
    require(je["style"].is_string(), "style must be a string");
    const auto style = parse_style(je["style"].get<std::string>());
    require(style.has_value(), "unknown style '" + je["style"].get<std::string>() + "'");
    e.style = *style;
    if (je.contains("annotator_frames")) {
      require(je["annotator_frames"].is_array(), "annotator_frames must be an array");
      for (const auto& f : je["annotator_frames"]) {
        require(f.is_number_integer(), "annotator frames must be integers");
        e.annotator_frames.push_back(f.get<std::int64_t>());
      }
    }
    if (je.contains("expected_frame") && !je["expected_frame"].is_null()) {
      require(je["expected_frame"].is_number(), "expected_frame must be a number");
      e.expected_frame = je["expected_frame"].get<double>();
    }
    require(e.expected_frame || !e.annotator_frames.empty(), "event needs annotator_frames or expected_frame");
    set.events.push_back(std::move(e));
  }
  return set;
}

std::string tde_to_json(const TdeResult& result, const Config& config) {
  nlohmann::ordered_json doc;
  doc["schema"] = kReportSchema;
  doc["parameters"] = detail::config_json(config);
  doc["frame_rate_hz"] = result.frame_rate_hz;
  doc["matching"] = "greedy nearest frame within (agent_id, style)";
  nlohmann::ordered_json per_style = nlohmann::ordered_json::object();
  for (const auto& [style, s] : result.per_style) {
    nlohmann::ordered_json j;
    j["matched"] = s.matched;
    j["unmatched"] = s.unmatched;
    if (s.mean_tde_seconds) {
      j["mean_tde_seconds"] = *s.mean_tde_seconds;
    } else {
      j["mean_tde_seconds"] = nullptr;
    }
    per_style[std::string(to_string(style))] = std::move(j);
  }
  doc["per_style"] = std::move(per_style);
  auto& events = doc["events"] = nlohmann::ordered_json::array();
  for (const auto& m : result.matched) {
    nlohmann::ordered_json j;
    j["agent_id"] = detail::agent_json(m.agent_id);
    j["style"] = to_string(m.style);
    j["t_sle"] = m.t_sle;
    j["expected_frame"] = m.expected_frame;
    j["tde_seconds"] = m.tde_seconds;
    events.push_back(std::move(j));
  }
  auto& unmatched = doc["unmatched"] = nlohmann::ordered_json::array();
  for (const auto& u : result.unmatched) {
    nlohmann::ordered_json j;
    j["agent_id"] = detail::agent_json(u.agent_id);
    j["style"] = to_string(u.style);
    j["expected_frame"] = u.expected_frame;
    unmatched.push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

std::string tde_table(const TdeResult& result) {
  struct Row {
    const char* label;
    Style style;
  };
  const Row rows[] = {{"OS", Style::overspeeding},
                      {"OT/SLC", Style::overtaking_or_sudden_lane_change},
                      {"W", Style::weaving},
                      {"C/speed", Style::conservative_uniform_speed},
                      {"C/lane", Style::conservative_no_lane_change}};
  std::string out;
  char line[128];
  std::snprintf(line, sizeof line, "%-8s %8s %10s %12s\n", "style", "matched", "unmatched", "mean_tde_s");
  out += line;
  for (const auto& r : rows) {
    auto it = result.per_style.find(r.style);
    const bool always = !(r.style == Style::conservative_uniform_speed || r.style == Style::conservative_no_lane_change);
    if (it == result.per_style.end() && !always) continue;
    const StyleSummary s = it == result.per_style.end() ? StyleSummary{} : it->second;
    char tde[32];
    if (s.mean_tde_seconds) std::snprintf(tde, sizeof tde, "%.4f", *s.mean_tde_seconds);
    else std::snprintf(tde, sizeof tde, "-");
    std::snprintf(line, sizeof line, "%-8s %8zu %10zu %12s\n", r.label, s.matched, s.unmatched, tde);
    out += line;
  }
  return out;
}

}  // namespace cmetric
