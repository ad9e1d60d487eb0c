#include <doctest.h>

#include <algorithm>
#include <set>

#include "cmetric/styles.hpp"
#include "cmetric/synth.hpp"
#include "oracles.hpp"

using namespace cmetric;

namespace {
std::set<Style> styles_of(const AgentReport& a) {
  std::set<Style> out;
  for (const auto& d : a.detections) out.insert(d.style);
  return out;
}

const AgentReport& agent(const StyleReport& r, std::uint64_t id) {
  const auto* a = r.find(AgentId(id));
  REQUIRE(a != nullptr);
  return *a;
}

SmoothedSeries smooth(const std::vector<double>& v) { return smooth_and_differentiate(v, 11, 2, 10.0); }
}  // namespace

TEST_CASE("detectors stay silent on constant rows") {
  const auto flat = smooth(std::vector<double>(40, 3.0));
  const Thresholds th;
  CHECK_FALSE(detect_overspeeding(flat, th));
  CHECK_FALSE(detect_overtaking(flat, th));
  CHECK_FALSE(detect_weaving(flat, 5, th));
  const auto cons = detect_conservative(flat, flat, 5, th);
  REQUIRE(cons.size() == 2);
  CHECK(cons[0].style == Style::conservative_uniform_speed);
  CHECK(cons[1].style == Style::conservative_no_lane_change);
  CHECK(cons[0].sie_at_t == doctest::Approx(th.zero_tol));
}

TEST_CASE("overspeeding detection on a degree staircase") {
  std::vector<double> deg(60, 0.0);
  for (std::size_t i = 20; i < 60; ++i) deg[i] = 1.0 + (i >= 23) + (i >= 26);
  const auto s = smooth(deg);
  const auto d = detect_overspeeding(s, Thresholds{});
  REQUIRE(d);
  CHECK(d->t_sle >= 20);
  CHECK(d->t_sle <= 26);
  CHECK(d->sle_max == s.sle_at(d->t_sle));
  CHECK(d->sie_at_t == s.sie_at(d->t_sle));
  Thresholds high;
  high.overspeed = d->sle_max + 1e-9;
  CHECK_FALSE(detect_overspeeding(s, high));
}

TEST_CASE("single-agent and tiny datasets") {
  std::vector<TrajectoryPoint> pts;
  for (int f = 0; f < 30; ++f) pts.push_back({AgentId(0u), f, 1.0, 1.0});
  for (int f = 0; f < 5; ++f) pts.push_back({AgentId(1u), f, 100.0, 1.0});
  const auto r = classify(TrajectoryDataset::from_points(pts, 10.0), Config{});
  CHECK(agent(r, 0).global_behavior == GlobalBehavior::conservative);
  CHECK(agent(r, 1).insufficient_data);
  CHECK(agent(r, 1).detections.empty());
}

TEST_CASE("scenario labels") {
  SUBCASE("mixed") {
    const auto data = generate(Scenario::defaults(ScenarioKind::mixed));
    const auto r = classify(data.dataset, Config{});
    CHECK(styles_of(agent(r, 4)).count(Style::weaving));
    CHECK(styles_of(agent(r, 5)).count(Style::overspeeding));
    CHECK(styles_of(agent(r, 5)).count(Style::overtaking_or_sudden_lane_change));
    for (std::uint64_t c = 0; c < 4; ++c)
      for (Style s : styles_of(agent(r, c))) CHECK_FALSE(is_aggressive(s));
    const auto& w = *std::find_if(agent(r, 4).detections.begin(), agent(r, 4).detections.end(),
                                  [](const StyleDetection& d) { return d.style == Style::weaving; });
    CHECK(w.evidence.size() >= 2);
    for (const auto& p : w.evidence) CHECK(p.sharpness > Config{}.thresholds.sharp_tol);
  }
  SUBCASE("conservative platoon") {
    const auto data = generate(Scenario::defaults(ScenarioKind::conservative_platoon));
    const auto r = classify(data.dataset, Config{});
    for (const auto& a : r.agents) {
      CHECK(a.global_behavior == GlobalBehavior::conservative);
      CHECK(styles_of(a) == std::set<Style>{Style::conservative_uniform_speed, Style::conservative_no_lane_change});
    }
  }
  SUBCASE("single lane change is not weaving") {
    const auto data = generate(Scenario::defaults(ScenarioKind::sudden_lane_change));
    const auto r = classify(data.dataset, Config{});
    CHECK(styles_of(agent(r, 2)).count(Style::overtaking_or_sudden_lane_change));
    CHECK_FALSE(styles_of(agent(r, 2)).count(Style::weaving));
  }
  SUBCASE("weaver is not conservative") {
    const auto data = generate(Scenario::defaults(ScenarioKind::weaving_sinusoid));
    const auto r = classify(data.dataset, Config{});
    CHECK(agent(r, 4).global_behavior == GlobalBehavior::aggressive);
    const auto st = styles_of(agent(r, 4));
    CHECK(st.count(Style::weaving));
    const auto& w = *std::find_if(agent(r, 4).detections.begin(), agent(r, 4).detections.end(),
                                  [](const StyleDetection& d) { return d.style == Style::weaving; });
    CHECK(w.evidence.size() >= 5);
  }
}

TEST_CASE("faster lane change has greater overtaking intensity") {
  auto intensity = [](int frames) {
    auto sc = Scenario::defaults(ScenarioKind::sudden_lane_change);
    sc.lane_change_frames = frames;
    Config c;
    c.thresholds.overtake = 0.0;  // force a detection on both variants
    const auto r = classify(generate(sc).dataset, c);
    for (const auto& d : agent(r, 2).detections)
      if (d.style == Style::overtaking_or_sudden_lane_change) return d.sie_at_t;
    FAIL("no detection");
    return 0.0;
  };
  CHECK(intensity(10) > intensity(20));
}

TEST_CASE("report-level properties on random data") {
  oracle::Rng rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const auto ds = oracle::random_dataset(rng, rng.integer(2, 8), 60, 40.0);
    Config c;
    const auto r = classify(ds, c);
    for (const auto& a : r.agents) {
      bool aggressive = false, conservative = false;
      for (const auto& d : a.detections) (is_aggressive(d.style) ? aggressive : conservative) = true;
      CHECK_FALSE((aggressive && conservative));
      CHECK(a.global_behavior == global_behavior_of(a.detections));
    }
    CHECK(report_to_json(r) == report_to_json(classify(ds, c)));

    Config higher = c;
    higher.thresholds.overspeed *= 1.5;
    const auto r2 = classify(ds, higher);
    for (std::size_t i = 0; i < r.agents.size(); ++i) {
      const bool before = styles_of(r.agents[i]).count(Style::overspeeding) > 0;
      const bool after = styles_of(r2.agents[i]).count(Style::overspeeding) > 0;
      CHECK((before || !after));
    }
  }
}

TEST_CASE("detectors read only their own row") {
  const auto data = generate(Scenario::defaults(ScenarioKind::mixed));
  const auto all = compute_series(data.dataset, 10.0);
  Config c;
  for (const auto& [id, s] : all) {
    CentralitySeries shuffled = s;
    std::reverse(shuffled.degree.begin(), shuffled.degree.end());
    const auto a = smooth_series(s, c), b = smooth_series(shuffled, c);
    const auto ot_a = detect_overtaking(a.closeness, c.thresholds), ot_b = detect_overtaking(b.closeness, c.thresholds);
    CHECK(ot_a.has_value() == ot_b.has_value());
    if (ot_a && ot_b) CHECK(ot_a->t_sle == ot_b->t_sle);
    const auto w_a = detect_weaving(a.closeness, c.epsilon, c.thresholds), w_b = detect_weaving(b.closeness, c.epsilon, c.thresholds);
    CHECK(w_a.has_value() == w_b.has_value());

    CentralitySeries other = s;
    std::reverse(other.closeness.begin(), other.closeness.end());
    const auto os_a = detect_overspeeding(a.degree, c.thresholds);
    const auto os_b = detect_overspeeding(smooth_series(other, c).degree, c.thresholds);
    CHECK(os_a.has_value() == os_b.has_value());
    if (os_a && os_b) CHECK(os_a->t_sle == os_b->t_sle);
  }
}

TEST_CASE("report json round trip") {
  const auto data = generate(Scenario::defaults(ScenarioKind::mixed));
  Config c;
  c.range = std::make_pair<std::int64_t, std::int64_t>(0, 199);
  const auto r = classify(data.dataset, c);
  const std::string text = report_to_json(r);
  CHECK(text.find("\"schema\": 1") != std::string::npos);
  const auto back = report_from_json(text);
  CHECK(report_to_json(back) == text);
}
