#include "cmetric/styles.hpp"

#include <algorithm>
#include <numeric>

#include "cmetric/error.hpp"
#include "json_support.hpp"
#include "parallel.hpp"

namespace cmetric {

std::string_view to_string(Style style) noexcept {
  switch (style) {
    case Style::overspeeding: return "overspeeding";
    case Style::overtaking_or_sudden_lane_change: return "overtaking_or_sudden_lane_change";
    case Style::weaving: return "weaving";
    case Style::conservative_uniform_speed: return "conservative_uniform_speed";
    case Style::conservative_no_lane_change: return "conservative_no_lane_change";
  }
  return "overspeeding";
}

std::optional<Style> parse_style(std::string_view text) noexcept {
  for (Style s : {Style::overspeeding, Style::overtaking_or_sudden_lane_change, Style::weaving,
                  Style::conservative_uniform_speed, Style::conservative_no_lane_change})
    if (to_string(s) == text) return s;
  return std::nullopt;
}

bool is_aggressive(Style style) noexcept {
  return style == Style::overspeeding || style == Style::overtaking_or_sudden_lane_change || style == Style::weaving;
}

std::string_view to_string(GlobalBehavior behavior) noexcept {
  switch (behavior) {
    case GlobalBehavior::aggressive: return "aggressive";
    case GlobalBehavior::conservative: return "conservative";
    case GlobalBehavior::neutral: return "neutral";
  }
  return "neutral";
}

namespace {

std::optional<StyleDetection> peak_detection(const SmoothedSeries& s, double threshold, Style style) {
  const auto [a, b] = confident_interval(s);
  const std::int64_t t = argmax_sle(s, a, b);
  const double peak = s.sle_at(t);
  if (peak < threshold) return std::nullopt;
  StyleDetection d;
  d.style = style;
  d.t_sle = t;
  d.sle_max = peak;
  d.sie_at_t = s.sie_at(t);
  return d;
}

double max_sle(const SmoothedSeries& s, std::int64_t a, std::int64_t b) {
  double m = 0.0;
  for (std::int64_t t = a; t <= b; ++t) m = std::max(m, s.sle_at(t));
  return m;
}

}  // namespace

std::optional<StyleDetection> detect_overspeeding(const SmoothedSeries& degree, const Thresholds& th) {
  return peak_detection(degree, th.overspeed, Style::overspeeding);
}

std::optional<StyleDetection> detect_overtaking(const SmoothedSeries& closeness, const Thresholds& th) {
  return peak_detection(closeness, th.overtake, Style::overtaking_or_sudden_lane_change);
}

std::optional<StyleDetection> detect_weaving(const SmoothedSeries& closeness, int epsilon, const Thresholds& th) {
  std::vector<ExtremePoint> strong;
  for (const auto& p : find_extreme_points(closeness, epsilon, th.zero_tol))
    if (p.sharpness > th.sharp_tol) strong.push_back(p);
  if (strong.size() < static_cast<std::size_t>(std::max(1, th.min_extrema))) return std::nullopt;
  const auto sharpest = std::max_element(strong.begin(), strong.end(), [](const ExtremePoint& a, const ExtremePoint& b) {
    return a.sharpness < b.sharpness;
  });
  StyleDetection d;
  d.style = Style::weaving;
  d.t_sle = sharpest->frame;
  d.sle_max = closeness.sle_at(d.t_sle);
  double total = 0.0;
  for (const auto& p : strong) total += p.sharpness;
  d.sie_at_t = total / static_cast<double>(strong.size());
  d.evidence = std::move(strong);
  return d;
}

std::vector<StyleDetection> detect_conservative(const SmoothedSeries& closeness, const SmoothedSeries& degree,
                                                int epsilon, const Thresholds& th) {
  const auto [c0, c1] = confident_interval(closeness);
  const auto [d0, d1] = confident_interval(degree);
  const double m0 = max_sle(closeness, c0, c1);
  const double m1 = max_sle(degree, d0, d1);
  if (m0 > th.zero_tol || m1 > th.zero_tol) return {};
  auto inside = [](const std::vector<ExtremePoint>& pts, std::int64_t a, std::int64_t b) {
    return std::any_of(pts.begin(), pts.end(), [&](const ExtremePoint& p) { return p.frame >= a && p.frame <= b; });
  };
  if (inside(find_extreme_points(closeness, epsilon, th.zero_tol), c0, c1) ||
      inside(find_extreme_points(degree, epsilon, th.zero_tol), d0, d1))
    return {};
  auto make = [&](const SmoothedSeries& s, std::int64_t a, std::int64_t b, Style style) {
    StyleDetection d;
    d.style = style;
    d.t_sle = argmax_sle(s, a, b);
    d.sle_max = s.sle_at(d.t_sle);
    d.sie_at_t = std::max(0.0, th.zero_tol - d.sle_max);
    return d;
  };
  return {make(degree, d0, d1, Style::conservative_uniform_speed),
          make(closeness, c0, c1, Style::conservative_no_lane_change)};
}

GlobalBehavior global_behavior_of(const std::vector<StyleDetection>& detections) noexcept {
  bool aggressive = false;
  bool conservative = false;
  for (const auto& d : detections) (is_aggressive(d.style) ? aggressive : conservative) = true;
  if (aggressive) return GlobalBehavior::aggressive;
  if (conservative) return GlobalBehavior::conservative;
  return GlobalBehavior::neutral;
}

const AgentReport* StyleReport::find(const AgentId& id) const noexcept {
  for (const auto& a : agents)
    if (a.agent_id == id) return &a;
  return nullptr;
}

AgentSignals smooth_series(const CentralitySeries& series, const Config& config) {
  std::vector<double> degree(series.degree.begin(), series.degree.end());
  return {smooth_and_differentiate(series.closeness, config.window, config.poly_degree, config.frame_rate_hz, series.first_frame),
          smooth_and_differentiate(degree, config.window, config.poly_degree, config.frame_rate_hz, series.first_frame)};
}

AgentReport classify_agent(const CentralitySeries& series, const Config& config) {
  AgentReport r;
  r.agent_id = series.agent_id;
  if (series.size() < static_cast<std::size_t>(config.window)) {
    r.insufficient_data = true;
    return r;
  }
  const AgentSignals sig = smooth_series(series, config);
  const Thresholds& th = config.thresholds;
  if (auto d = detect_overspeeding(sig.degree, th)) r.detections.push_back(std::move(*d));
  if (auto d = detect_overtaking(sig.closeness, th)) r.detections.push_back(std::move(*d));
  if (auto d = detect_weaving(sig.closeness, config.epsilon, th)) r.detections.push_back(std::move(*d));
  // Conservative conditions only stand when nothing aggressive fired.
  if (r.detections.empty())
    for (auto& d : detect_conservative(sig.closeness, sig.degree, config.epsilon, th)) r.detections.push_back(std::move(d));
  for (auto& d : r.detections) d.agent_id = series.agent_id;
  r.global_behavior = global_behavior_of(r.detections);
  return r;
}

StyleReport classify(const TrajectoryDataset& ds, const Config& config) {
  config.validate();
  const TrajectoryDataset* data = &ds;
  std::optional<TrajectoryDataset> sliced;
  if (config.range) {
    sliced.emplace(ds.slice(config.range->first, config.range->second));
    data = &*sliced;
  }
  const auto series = compute_series(*data, config.mu);
  std::vector<const CentralitySeries*> order;
  for (const auto& [id, s] : series) order.push_back(&s);

  StyleReport report;
  report.parameters = config;
  report.agents.resize(order.size());
  detail::parallel_for(order.size(), [&](std::size_t i) { report.agents[i] = classify_agent(*order[i], config); }, 4);
  return report;
}

std::string report_to_json(const StyleReport& report) {
  nlohmann::ordered_json doc;
  doc["schema"] = kReportSchema;
  doc["parameters"] = detail::config_json(report.parameters);
  auto& agents = doc["agents"] = nlohmann::ordered_json::array();
  for (const auto& a : report.agents) {
    nlohmann::ordered_json ja;
    ja["agent_id"] = detail::agent_json(a.agent_id);
    ja["global_behavior"] = to_string(a.global_behavior);
    ja["status"] = a.insufficient_data ? "insufficient_data" : "ok";
    auto& dets = ja["detections"] = nlohmann::ordered_json::array();
    for (const auto& d : a.detections) {
      nlohmann::ordered_json jd;
      jd["style"] = to_string(d.style);
      jd["t_sle"] = d.t_sle;
      jd["sle_max"] = d.sle_max;
      jd["sie"] = d.sie_at_t;
      auto& ev = jd["evidence"] = nlohmann::ordered_json::array();
      for (const auto& p : d.evidence) {
        nlohmann::ordered_json jp;
        jp["frame"] = p.frame;
        jp["kind"] = to_string(p.kind);
        jp["sharpness"] = p.sharpness;
        ev.push_back(std::move(jp));
      }
      dets.push_back(std::move(jd));
    }
    agents.push_back(std::move(ja));
  }
  return doc.dump(2) + "\n";
}

StyleReport report_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::parse, e.what());
  }
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorKind::validation, "report: " + what);
  };
  require(doc.is_object(), "expected an object");
  require(doc.value("schema", 0) == kReportSchema, "unsupported schema version");
  require(doc.contains("parameters") && doc.contains("agents") && doc["agents"].is_array(), "missing parameters or agents");
  StyleReport report;
  report.parameters = detail::apply_config_json(doc["parameters"], Config{});
  for (const auto& ja : doc["agents"]) {
    require(ja.is_object() && ja.contains("agent_id") && ja.contains("detections"), "malformed agent entry");
    AgentReport a;
    a.agent_id = detail::agent_from(ja["agent_id"]);
    a.insufficient_data = ja.value("status", std::string("ok")) == "insufficient_data";
    for (const auto& jd : ja["detections"]) {
      require(jd.is_object() && jd.contains("style") && jd.contains("t_sle"), "malformed detection");
      const auto style = parse_style(jd["style"].get<std::string>());
      require(style.has_value(), "unknown style '" + jd["style"].get<std::string>() + "'");
      require(jd["t_sle"].is_number_integer(), "t_sle must be an integer frame");
      StyleDetection d;
      d.agent_id = a.agent_id;
      d.style = *style;
      d.t_sle = jd["t_sle"].get<std::int64_t>();
      d.sle_max = jd.value("sle_max", 0.0);
      d.sie_at_t = jd.value("sie", 0.0);
      if (jd.contains("evidence"))
        for (const auto& jp : jd["evidence"])
          d.evidence.push_back({jp.value("frame", std::int64_t{0}),
                                jp.value("kind", std::string("minimum")) == "maximum" ? ExtremumKind::maximum
                                                                                       : ExtremumKind::minimum,
                                jp.value("sharpness", 0.0)});
      a.detections.push_back(std::move(d));
    }
    a.global_behavior = global_behavior_of(a.detections);
    report.agents.push_back(std::move(a));
  }
  return report;
}

}  // namespace cmetric
