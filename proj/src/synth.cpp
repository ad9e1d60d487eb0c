#include "cmetric/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "cmetric/error.hpp"
#include "json_support.hpp"

namespace cmetric {

std::string_view to_string(ScenarioKind kind) noexcept {
  switch (kind) {
    case ScenarioKind::conservative_platoon: return "conservative_platoon";
    case ScenarioKind::overspeeding_pass: return "overspeeding_pass";
    case ScenarioKind::overtake_single: return "overtake_single";
    case ScenarioKind::sudden_lane_change: return "sudden_lane_change";
    case ScenarioKind::weaving_sinusoid: return "weaving_sinusoid";
    case ScenarioKind::mixed: return "mixed";
  }
  return "mixed";
}

std::optional<ScenarioKind> parse_scenario_kind(std::string_view text) noexcept {
  for (auto k : {ScenarioKind::conservative_platoon, ScenarioKind::overspeeding_pass, ScenarioKind::overtake_single,
                 ScenarioKind::sudden_lane_change, ScenarioKind::weaving_sinusoid, ScenarioKind::mixed})
    if (to_string(k) == text) return k;
  return std::nullopt;
}

Scenario Scenario::defaults(ScenarioKind kind) {
  Scenario s;
  s.kind = kind;
  switch (kind) {
    case ScenarioKind::conservative_platoon:
      s.agents = 4;
      s.frames = 100;
      break;
    case ScenarioKind::overspeeding_pass:
      s.agents = 7;  // six parked, one passer
      s.frames = 200;
      s.spacing = 6.0;
      s.speed = 0.0;
      s.speed_fast = 20.0;
      s.event_frame = 60.0;
      break;
    case ScenarioKind::overtake_single:
      s.agents = 2;
      s.frames = 200;
      s.speed_fast = 25.0;
      break;
    case ScenarioKind::sudden_lane_change:
      s.agents = 3;
      s.frames = 120;
      s.event_frame = 50.0;
      break;
    case ScenarioKind::weaving_sinusoid:
      s.agents = 5;
      s.frames = 200;
      s.event_frame = 40.0;
      break;
    case ScenarioKind::mixed:
      s.agents = 6;
      s.frames = 200;
      s.speed_fast = 18.0;
      s.event_frame = 90.0;
      break;
  }
  return s;
}

void Scenario::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::parameter, "scenario: " + what); };
  if (frames < 2) fail("frames must be >= 2");
  if (!std::isfinite(frame_rate_hz) || frame_rate_hz <= 0.0) fail("frame_rate_hz must be positive");
  if (!(lane_width > 0.0) || !(mu > lane_width)) fail("need 0 < lane_width < mu");
  if (!(spacing > 0.0)) fail("spacing must be positive");
  if (!(speed >= 0.0) || !std::isfinite(speed)) fail("speed must be non-negative");
  if (!(jitter >= 0.0) || !std::isfinite(jitter)) fail("jitter must be non-negative");
  if (lane_change_frames < 1) fail("lane_change_frames must be >= 1");
  switch (kind) {
    case ScenarioKind::conservative_platoon:
      if (agents < 1) fail("agents must be >= 1");
      break;
    case ScenarioKind::overspeeding_pass:
      if (agents < 2) fail("agents must be >= 2");
      if (!(speed_fast > speed)) fail("speed_fast must exceed speed");
      break;
    case ScenarioKind::overtake_single:
      if (agents != 2) fail("overtake_single has exactly 2 agents");
      if (!(speed_fast > speed)) fail("speed_fast must exceed speed");
      break;
    case ScenarioKind::sudden_lane_change:
      if (agents != 3) fail("sudden_lane_change has exactly 3 agents");
      break;
    case ScenarioKind::weaving_sinusoid:
      if (agents < 2) fail("agents must be >= 2");
      if (!(lateral_amplitude > 0.0)) fail("lateral_amplitude must be positive");
      if (period_frames < 4 || oscillations < 1) fail("need period_frames >= 4 and oscillations >= 1");
      break;
    case ScenarioKind::mixed:
      if (agents != 6) fail("mixed has exactly 6 agents");
      if (!(speed_fast > speed)) fail("speed_fast must exceed speed");
      if (!(lateral_amplitude > 0.0) || period_frames < 4) fail("need a positive amplitude and period_frames >= 4");
      break;
  }
}

namespace {

// Platform-independent uniform draws (std distributions are not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double a, double b) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return a + (b - a) * u;
  }

 private:
  std::mt19937_64 engine_;
};

double lane_change(double n, double start, double duration, double y0, double y1) {
  const double s = std::clamp((n - start) / duration, 0.0, 1.0);
  return y0 + (y1 - y0) * (1.0 - std::cos(std::numbers::pi * s)) / 2.0;
}

struct Builder {
  const Scenario& sc;
  std::vector<AgentTrack> tracks;
  std::vector<GroundTruthEvent> events;

  double t(int n) const { return static_cast<double>(n) / sc.frame_rate_hz; }

  template <class Fn>
  void agent(std::uint64_t id, Fn&& position) {
    AgentTrack tr{AgentId(id), 0, {}};
    tr.positions.reserve(static_cast<std::size_t>(sc.frames));
    for (int n = 0; n < sc.frames; ++n) tr.positions.push_back(position(n));
    tracks.push_back(std::move(tr));
  }

  void event(std::uint64_t id, Style style, double start, double end, double expected) {
    const auto a = static_cast<std::int64_t>(std::floor(start));
    const auto b = static_cast<std::int64_t>(std::ceil(end));
    if (a < 0 || b > sc.frames - 1)
      throw Error(ErrorKind::parameter, "scenario: scripted maneuver does not fit in " + std::to_string(sc.frames) + " frames");
    if (expected < static_cast<double>(a) || expected > static_cast<double>(b))
      throw Error(ErrorKind::internal, "expected frame outside its window");
    events.push_back({AgentId(id), style, a, b, expected});
  }

  // Platoon of k agents in lane 0, headway `spacing`.
  void platoon(int k, double v) {
    for (int i = 0; i < k; ++i) agent(static_cast<std::uint64_t>(i), [&, i](int n) { return Vec2{sc.spacing * i + v * t(n), 0.0}; });
  }

  // First and last frames at which two tracks are closer than mu.
  std::optional<std::pair<int, int>> contact(std::size_t a, std::size_t b) const {
    std::optional<std::pair<int, int>> out;
    for (int n = 0; n < sc.frames; ++n) {
      const auto& p = tracks[a].positions[static_cast<std::size_t>(n)];
      const auto& q = tracks[b].positions[static_cast<std::size_t>(n)];
      if (std::hypot(p.x - q.x, p.y - q.y) < sc.mu) {
        if (!out) out = std::make_pair(n, n);
        out->second = n;
      }
    }
    return out;
  }
};

void conservative_platoon(Builder& b, Rng& rng) {
  const double v = b.sc.speed + rng.uniform(-0.5, 0.5);
  b.platoon(b.sc.agents, v);
}

void overspeeding_pass(Builder& b, Rng& rng) {
  const Scenario& sc = b.sc;
  const int k = sc.agents - 1;
  const double vf = sc.speed_fast + rng.uniform(-0.5, 0.5);
  const double vs = sc.speed;
  const double reach = std::sqrt(sc.mu * sc.mu - sc.lane_width * sc.lane_width);
  const double x_queue = 100.0;
  const double x0 = x_queue - reach - (vf - vs) * sc.event_frame / sc.frame_rate_hz + rng.uniform(-1.0, 1.0);
  for (int i = 0; i < k; ++i)
    b.agent(static_cast<std::uint64_t>(i), [&, i](int n) { return Vec2{x_queue + sc.spacing * i + vs * b.t(n), 0.0}; });
  b.agent(static_cast<std::uint64_t>(k), [&](int n) { return Vec2{x0 + vf * b.t(n), sc.lane_width}; });

  // Continuous frames at which the passer enters range of, draws level with,
  // and leaves each queued agent.
  const double rate = (vf - vs) / sc.frame_rate_hz;
  double enter_sum = 0.0, level_sum = 0.0;
  for (int i = 0; i < k; ++i) {
    enter_sum += (x_queue + sc.spacing * i - reach - x0) / rate;
    level_sum += (x_queue + sc.spacing * i - x0) / rate;
  }
  const double first_enter = (x_queue - reach - x0) / rate;
  const double last_exit = (x_queue + sc.spacing * (k - 1) + reach - x0) / rate;
  b.event(static_cast<std::uint64_t>(k), Style::overspeeding, first_enter, last_exit, enter_sum / k);
  if (vs > 0.0)
    b.event(static_cast<std::uint64_t>(k), Style::overtaking_or_sudden_lane_change, first_enter, last_exit, level_sum / k);
}

void overtake_single(Builder& b, Rng& rng) {
  const Scenario& sc = b.sc;
  const double vs = sc.speed + rng.uniform(-0.5, 0.5);
  const double x0 = 40.0 + rng.uniform(-1.0, 1.0);
  const double lc = sc.lane_change_frames;
  auto rel = [&](int n) { return (x0 + sc.speed_fast * b.t(n)) - (100.0 + vs * b.t(n)); };
  auto first_above = [&](double gap) {
    for (int n = 0; n < sc.frames; ++n)
      if (rel(n) > gap) return n;
    throw Error(ErrorKind::parameter, "scenario: overtake does not complete within the frame budget");
  };
  const int t_out = first_above(-20.0);
  const int t_pass = first_above(0.0);
  const int t_back = first_above(12.0);
  b.agent(0, [&](int n) { return Vec2{100.0 + vs * b.t(n), 0.0}; });
  b.agent(1, [&](int n) {
    const double y = lane_change(n, t_out, lc, 0.0, sc.lane_width) - lane_change(n, t_back, lc, 0.0, sc.lane_width);
    return Vec2{x0 + sc.speed_fast * b.t(n), y};
  });
  b.event(1, Style::overtaking_or_sudden_lane_change, t_out, std::min<double>(t_back + lc, sc.frames - 1), t_pass);
}

void sudden_lane_change(Builder& b, Rng& rng) {
  const Scenario& sc = b.sc;
  const double v = sc.speed + rng.uniform(-0.5, 0.5);
  const double t0 = std::round(sc.event_frame);
  const double lc = sc.lane_change_frames;
  b.agent(0, [&](int n) { return Vec2{4.0 + v * b.t(n), 0.0}; });
  b.agent(1, [&](int n) { return Vec2{-4.0 + v * b.t(n), 0.0}; });
  b.agent(2, [&](int n) { return Vec2{v * b.t(n), lane_change(n, t0, lc, 2.0 * sc.lane_width, sc.lane_width)}; });
  b.event(2, Style::overtaking_or_sudden_lane_change, t0, t0 + lc, t0 + lc / 2.0);
}

// The weaver rides between lanes 1 and 2, beside the platoon's front half.
constexpr double kWeaveCentre = 4.5;

void weaving_sinusoid(Builder& b, Rng& rng) {
  const Scenario& sc = b.sc;
  const double v = sc.speed + rng.uniform(-0.5, 0.5);
  const int k = sc.agents - 1;
  const double p = sc.period_frames;
  const double t0 = std::round(sc.event_frame);
  const double t1 = t0 + sc.oscillations * p;
  b.platoon(k, v);
  b.agent(static_cast<std::uint64_t>(k), [&](int n) {
    const double y = (n >= t0 && n <= t1) ? sc.lateral_amplitude * std::sin(2.0 * std::numbers::pi * (n - t0) / p) : 0.0;
    return Vec2{1.5 * sc.spacing + v * b.t(n), kWeaveCentre + y};
  });
  const int peaks = 2 * sc.oscillations;
  const double first = t0 + p / 4.0;
  const double last = first + (peaks - 1) * p / 2.0;
  b.event(static_cast<std::uint64_t>(k), Style::weaving, first, last, (first + last) / 2.0);
}

void mixed(Builder& b, Rng& rng) {
  const Scenario& sc = b.sc;
  const double v = sc.speed + rng.uniform(-0.5, 0.5);
  const double amp = sc.lateral_amplitude * (1.0 + rng.uniform(-0.05, 0.05));
  const double offset = rng.uniform(-2.0, 2.0);
  const double dv = sc.speed_fast - sc.speed;
  const double p = sc.period_frames;
  const double pass = sc.event_frame;
  // Phase puts the weaver at its platoon-side extreme when the passer draws level.
  const double phase = pass - 1.75 * p;
  b.platoon(4, v);
  b.agent(4, [&](int n) {
    return Vec2{1.5 * sc.spacing + v * b.t(n), kWeaveCentre + amp * std::sin(2.0 * std::numbers::pi * (n - phase) / p)};
  });
  // The fast lane sits far enough out that the passer only ever meets the weaver.
  const double fast_lane = kWeaveCentre + 6.5;
  const double x0 = 1.5 * sc.spacing - dv * pass / sc.frame_rate_hz + offset;
  b.agent(5, [&](int n) { return Vec2{x0 + (v + dv) * b.t(n), fast_lane}; });

  double first_peak = phase + p / 4.0;
  while (first_peak - p / 2.0 >= 0.0) first_peak -= p / 2.0;
  double last_peak = first_peak;
  while (last_peak + p / 2.0 <= sc.frames - 1) last_peak += p / 2.0;
  b.event(4, Style::weaving, first_peak, last_peak, (first_peak + last_peak) / 2.0);

  const double level = pass - offset * sc.frame_rate_hz / dv;
  auto window = b.contact(4, 5).value_or(std::make_pair(static_cast<int>(std::floor(level)), static_cast<int>(std::ceil(level))));
  const double lo = std::min<double>(window.first, std::floor(level));
  const double hi = std::max<double>(window.second, std::ceil(level));
  b.event(5, Style::overspeeding, lo, hi, level);
  b.event(5, Style::overtaking_or_sudden_lane_change, lo, hi, level);
}

}  // namespace

SyntheticData generate(const Scenario& scenario) {
  scenario.validate();
  Rng rng(scenario.seed);
  Builder b{scenario, {}, {}};
  switch (scenario.kind) {
    case ScenarioKind::conservative_platoon: conservative_platoon(b, rng); break;
    case ScenarioKind::overspeeding_pass: overspeeding_pass(b, rng); break;
    case ScenarioKind::overtake_single: overtake_single(b, rng); break;
    case ScenarioKind::sudden_lane_change: sudden_lane_change(b, rng); break;
    case ScenarioKind::weaving_sinusoid: weaving_sinusoid(b, rng); break;
    case ScenarioKind::mixed: mixed(b, rng); break;
  }
  if (scenario.jitter > 0.0)
    for (auto& tr : b.tracks)
      for (auto& p : tr.positions) {
        p.x += rng.uniform(-scenario.jitter, scenario.jitter);
        p.y += rng.uniform(-scenario.jitter, scenario.jitter);
      }
  return {TrajectoryDataset::from_tracks(std::move(b.tracks), scenario.frame_rate_hz), std::move(b.events)};
}

std::string truth_to_json(const std::vector<GroundTruthEvent>& events, double frame_rate_hz) {
  nlohmann::ordered_json doc;
  doc["frame_rate_hz"] = frame_rate_hz;
  auto& arr = doc["events"] = nlohmann::ordered_json::array();
  for (const auto& e : events) {
    nlohmann::ordered_json j;
    j["agent_id"] = detail::agent_json(e.agent_id);
    j["style"] = to_string(e.style);
    j["window"] = nlohmann::ordered_json::array({e.window_start, e.window_end});
    j["expected_frame"] = e.expected_frame;
    arr.push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

}  // namespace cmetric
