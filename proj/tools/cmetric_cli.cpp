// cmetric: analyze | generate | eval | export
#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cmetric/centrality.hpp"
#include "cmetric/config.hpp"
#include "cmetric/error.hpp"
#include "cmetric/eval.hpp"
#include "cmetric/graph.hpp"
#include "cmetric/ingest.hpp"
#include "cmetric/signal.hpp"
#include "cmetric/simd.hpp"
#include "cmetric/styles.hpp"
#include "cmetric/synth.hpp"

using namespace cmetric;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::io, "failed reading '" + path + "'");
  return buf.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    if (!std::cout) throw Error(ErrorKind::io, "failed writing to stdout");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write '" + path + "'");
  out << content;
  out.flush();
  if (!out) throw Error(ErrorKind::io, "failed writing '" + path + "'");
}

TrajectoryFormat format_for(const std::string& path, std::string_view content) {
  if (auto f = format_from_path(path)) return *f;
  for (char c : content) {
    if (c == ' ' || c == '\n' || c == '\r' || c == '\t') continue;
    return c == '{' ? TrajectoryFormat::json : TrajectoryFormat::csv;
  }
  return TrajectoryFormat::csv;
}

// Flags shared by the commands that run the analysis pipeline.
struct AnalysisFlags {
  std::string input;
  std::string config_path;
  std::optional<double> mu;
  std::optional<int> window;
  std::optional<int> poly_degree;
  std::optional<int> epsilon;
  std::optional<double> fps;
  std::optional<std::string> range;

  void attach(CLI::App* cmd) {
    cmd->add_option("--input", input, "Trajectory file (.csv or .json)")->required();
    cmd->add_option("--config", config_path, "Config file (.json or .toml)");
    cmd->add_option("--mu", mu, "Proximity threshold in meters");
    cmd->add_option("--window", window, "Smoothing window in frames (odd)");
    cmd->add_option("--poly-degree", poly_degree, "Local polynomial degree");
    cmd->add_option("--epsilon", epsilon, "Sharpness neighbourhood in frames");
    cmd->add_option("--fps", fps, "Frame rate in Hz");
    cmd->add_option("--range", range, "Analyse only frames A:B");
  }

  Config resolve() const {
    Config c;
    if (!config_path.empty()) c = load_config_file(config_path, c);
    if (mu) c.mu = *mu;
    if (window) c.window = *window;
    if (poly_degree) c.poly_degree = *poly_degree;
    if (epsilon) c.epsilon = *epsilon;
    if (fps) c.frame_rate_hz = *fps;
    if (range) {
      const auto colon = range->find(':');
      try {
        if (colon == std::string::npos) throw std::invalid_argument("no colon");
        std::size_t used_a = 0, used_b = 0;
        const std::string a = range->substr(0, colon), b = range->substr(colon + 1);
        c.range = std::make_pair(std::stoll(a, &used_a), std::stoll(b, &used_b));
        if (used_a != a.size() || used_b != b.size()) throw std::invalid_argument("trailing text");
      } catch (const std::logic_error&) {
        throw Error(ErrorKind::config, "--range expects A:B with integer frames");
      }
    }
    c.validate();
    return c;
  }

  // Loads the dataset and pins the config's frame rate to the one used.
  TrajectoryDataset load(Config& c) const {
    const std::string content = read_file(input);
    const bool explicit_rate = fps.has_value() || c.frame_rate_hz != kDefaultFrameRateHz;
    auto ds = parse_trajectories(content, format_for(input, content),
                                 explicit_rate ? std::optional<double>(c.frame_rate_hz) : std::nullopt);
    c.frame_rate_hz = ds.frame_rate_hz();
    return ds;
  }
};

std::string format_value(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Driving-style classification from trajectories via dynamic geometric graphs"};
  app.require_subcommand(1);
  std::string isa;
  app.add_option("--isa", isa, "Force a kernel variant: scalar, avx2 or neon");

  AnalysisFlags analyze_flags;
  std::string analyze_out;
  auto* analyze = app.add_subcommand("analyze", "Classify every agent and write a JSON report");
  analyze_flags.attach(analyze);
  analyze->add_option("--out", analyze_out, "Report path (stdout when omitted)");

  std::string scenario_name, gen_out, gen_truth;
  std::uint64_t seed = 0;
  std::optional<int> gen_frames, gen_agents, gen_period, gen_lc;
  std::optional<double> gen_fps, gen_jitter, gen_speed, gen_fast, gen_amp, gen_event, gen_spacing;
  auto* generate_cmd = app.add_subcommand("generate", "Write a synthetic scenario and its ground truth");
  generate_cmd->add_option("--scenario", scenario_name, "conservative_platoon | overspeeding_pass | overtake_single | "
                                                        "sudden_lane_change | weaving_sinusoid | mixed")->required();
  generate_cmd->add_option("--seed", seed, "Random seed");
  generate_cmd->add_option("--out", gen_out, "Trajectory path (.csv or .json)")->required();
  generate_cmd->add_option("--truth", gen_truth, "Ground-truth JSON path");
  generate_cmd->add_option("--frames", gen_frames);
  generate_cmd->add_option("--fps", gen_fps);
  generate_cmd->add_option("--agents", gen_agents);
  generate_cmd->add_option("--jitter", gen_jitter, "Uniform positional noise in meters");
  generate_cmd->add_option("--speed", gen_speed);
  generate_cmd->add_option("--speed-fast", gen_fast);
  generate_cmd->add_option("--amplitude", gen_amp);
  generate_cmd->add_option("--period", gen_period);
  generate_cmd->add_option("--event-frame", gen_event);
  generate_cmd->add_option("--lane-change-frames", gen_lc);
  generate_cmd->add_option("--spacing", gen_spacing);

  std::string report_path, truth_path, eval_out;
  std::optional<double> eval_fps;
  auto* eval_cmd = app.add_subcommand("eval", "Time Deviation Error of a report against ground truth");
  eval_cmd->add_option("--report", report_path)->required();
  eval_cmd->add_option("--truth", truth_path)->required();
  eval_cmd->add_option("--fps", eval_fps, "Frame rate; must agree with the report");
  eval_cmd->add_option("--out", eval_out, "Machine-readable JSON result");

  AnalysisFlags export_flags;
  std::string series_name, agent_name, export_out;
  bool graph = false;
  std::optional<std::int64_t> export_frame;
  auto* export_cmd = app.add_subcommand("export", "Dump centrality/derivative series or per-frame graphs");
  export_flags.attach(export_cmd);
  export_cmd->add_option("--series", series_name, "closeness | degree | sle0 | sle1 | sie0 | sie1");
  export_cmd->add_option("--agent", agent_name);
  export_cmd->add_flag("--graph", graph, "Per-frame adjacency as JSON");
  export_cmd->add_option("--frame", export_frame, "Single frame for --graph");
  export_cmd->add_option("--out", export_out, "Output path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 4;
  }

  try {
    if (!isa.empty()) {
      auto parsed = simd::parse_isa(isa);
      if (!parsed) throw Error(ErrorKind::config, "unknown --isa '" + isa + "'");
      simd::set_active(*parsed);
    }

    if (analyze->parsed()) {
      Config c = analyze_flags.resolve();
      const auto ds = analyze_flags.load(c);
      write_output(analyze_out, report_to_json(classify(ds, c)));
      return 0;
    }

    if (generate_cmd->parsed()) {
      const auto kind = parse_scenario_kind(scenario_name);
      if (!kind) throw Error(ErrorKind::config, "unknown scenario '" + scenario_name + "'");
      Scenario s = Scenario::defaults(*kind);
      s.seed = seed;
      if (gen_frames) s.frames = *gen_frames;
      if (gen_fps) s.frame_rate_hz = *gen_fps;
      if (gen_agents) s.agents = *gen_agents;
      if (gen_jitter) s.jitter = *gen_jitter;
      if (gen_speed) s.speed = *gen_speed;
      if (gen_fast) s.speed_fast = *gen_fast;
      if (gen_amp) s.lateral_amplitude = *gen_amp;
      if (gen_period) s.period_frames = *gen_period;
      if (gen_event) s.event_frame = *gen_event;
      if (gen_lc) s.lane_change_frames = *gen_lc;
      if (gen_spacing) s.spacing = *gen_spacing;
      const auto data = generate(s);
      const auto fmt = format_from_path(gen_out).value_or(TrajectoryFormat::csv);
      write_output(gen_out, write_trajectories(data.dataset, fmt));
      if (!gen_truth.empty()) write_output(gen_truth, truth_to_json(data.events, s.frame_rate_hz));
      return 0;
    }

    if (eval_cmd->parsed()) {
      const auto report = report_from_json(read_file(report_path));
      auto truth = annotations_from_json(read_file(truth_path));
      if (eval_fps) {
        if (*eval_fps != report.parameters.frame_rate_hz)
          throw Error(ErrorKind::config, "--fps " + format_value(*eval_fps) + " differs from the report's " +
                                             format_value(report.parameters.frame_rate_hz) + " Hz");
        if (!truth.frame_rate_hz) truth.frame_rate_hz = *eval_fps;
      }
      const auto result = compute_tde(report, truth);
      std::cout << tde_table(result);
      if (!result.unmatched.empty()) std::cout << result.unmatched.size() << " unmatched event(s)\n";
      if (!eval_out.empty()) write_output(eval_out, tde_to_json(result, report.parameters));
      return 0;
    }

    if (export_cmd->parsed()) {
      Config c = export_flags.resolve();
      auto ds = export_flags.load(c);
      if (c.range) ds = ds.slice(c.range->first, c.range->second);
      if (graph == !series_name.empty()) throw Error(ErrorKind::config, "export needs exactly one of --graph or --series");
      if (graph) {
        auto one = [&](std::int64_t frame) {
          const auto g = build_frame_graph(ds, frame, c.mu);
          nlohmann::ordered_json j;
          j["frame"] = frame;
          auto& agents = j["agents"] = nlohmann::ordered_json::array();
          for (const auto& a : g.agents) agents.push_back(a.is_numeric() ? nlohmann::ordered_json(std::stoull(a.str()))
                                                                         : nlohmann::ordered_json(a.str()));
          auto& edges = j["edges"] = nlohmann::ordered_json::array();
          for (std::size_t a = 0; a < g.size(); ++a)
            for (std::size_t b = a + 1; b < g.size(); ++b)
              if (const double w = g.adjacency(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)); w != 0.0)
                edges.push_back(nlohmann::ordered_json::array({a, b, w}));
          return j;
        };
        nlohmann::ordered_json doc;
        if (export_frame) {
          doc = one(*export_frame);
        } else {
          doc = nlohmann::ordered_json::array();
          for (std::int64_t f = ds.t_min(); f <= ds.t_max(); ++f) doc.push_back(one(f));
        }
        write_output(export_out, doc.dump() + "\n");
        return 0;
      }
      if (agent_name.empty()) throw Error(ErrorKind::config, "--series needs --agent");
      const AgentId agent(agent_name);
      const auto* track = ds.find(agent);
      if (!track) throw Error(ErrorKind::not_present, "agent " + agent_name + " is not in the dataset");
      const auto series = compute_series(ds, c.mu).at(agent);
      std::vector<double> values;
      if (series_name == "closeness") {
        values = series.closeness;
      } else if (series_name == "degree") {
        values.assign(series.degree.begin(), series.degree.end());
      } else if (series_name == "sle0" || series_name == "sle1" || series_name == "sie0" || series_name == "sie1") {
        const auto sig = smooth_series(series, c);
        const auto& s = series_name.back() == '0' ? sig.closeness : sig.degree;
        values = series_name.rfind("sle", 0) == 0 ? sle(s) : sie(s);
      } else {
        throw Error(ErrorKind::config, "unknown series '" + series_name + "'");
      }
      std::string out = "frame,value\n";
      for (std::size_t i = 0; i < values.size(); ++i)
        out += std::to_string(series.first_frame + static_cast<std::int64_t>(i)) + "," + format_value(values[i]) + "\n";
      write_output(export_out, out);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "cmetric: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "cmetric: internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
