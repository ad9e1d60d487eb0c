#include "cmetric/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <system_error>

#include <json.hpp>

#include "cmetric/error.hpp"
#include "json_support.hpp"

namespace cmetric {

namespace {

bool canonical_uint(const std::string& s) noexcept {
  if (s.empty() || s.size() > 19) return false;
  if (s.size() > 1 && s[0] == '0') return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string_view trim(std::string_view s) noexcept {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

void check_rate(double frame_rate_hz) {
  if (!std::isfinite(frame_rate_hz) || frame_rate_hz <= 0.0)
    throw Error(ErrorKind::config, "frame rate must be a positive finite number");
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

bool AgentId::is_numeric() const noexcept { return canonical_uint(value_); }

std::strong_ordering operator<=>(const AgentId& a, const AgentId& b) noexcept {
  const bool na = a.is_numeric();
  const bool nb = b.is_numeric();
  if (na != nb) return na ? std::strong_ordering::less : std::strong_ordering::greater;
  if (na && a.value_.size() != b.value_.size()) return a.value_.size() <=> b.value_.size();
  return a.value_ <=> b.value_;
}

TrajectoryDataset TrajectoryDataset::from_points(std::vector<TrajectoryPoint> points, double frame_rate_hz) {
  check_rate(frame_rate_hz);
  if (points.empty()) throw Error(ErrorKind::validation, "no trajectory points");
  for (const auto& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw Error(ErrorKind::validation, "non-finite coordinate for agent " + p.agent_id.str() + " at frame " +
                                             std::to_string(p.frame));
    if (p.frame < 0)
      throw Error(ErrorKind::validation, "negative frame for agent " + p.agent_id.str());
  }
  std::sort(points.begin(), points.end(), [](const TrajectoryPoint& a, const TrajectoryPoint& b) {
    if (a.agent_id != b.agent_id) return a.agent_id < b.agent_id;
    return a.frame < b.frame;
  });
  std::vector<AgentTrack> tracks;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (tracks.empty() || tracks.back().id != p.agent_id) {
      tracks.push_back(AgentTrack{p.agent_id, p.frame, {}});
    } else {
      const std::int64_t expect = tracks.back().last_frame() + 1;
      if (p.frame == expect - 1)
        throw Error(ErrorKind::validation, "duplicate (agent, frame) = (" + p.agent_id.str() + ", " +
                                               std::to_string(p.frame) + ")");
      if (p.frame != expect)
        throw Error(ErrorKind::validation, "frames of agent " + p.agent_id.str() + " are not contiguous (gap before " +
                                               std::to_string(p.frame) + ")");
    }
    tracks.back().positions.push_back({p.x, p.y});
  }
  return from_tracks(std::move(tracks), frame_rate_hz);
}

TrajectoryDataset TrajectoryDataset::from_tracks(std::vector<AgentTrack> tracks, double frame_rate_hz) {
  check_rate(frame_rate_hz);
  std::sort(tracks.begin(), tracks.end(), [](const AgentTrack& a, const AgentTrack& b) { return a.id < b.id; });
  TrajectoryDataset ds;
  ds.frame_rate_hz_ = frame_rate_hz;
  bool first = true;
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    const auto& t = tracks[i];
    if (t.positions.empty()) throw Error(ErrorKind::validation, "agent " + t.id.str() + " has no frames");
    if (t.first_frame < 0) throw Error(ErrorKind::validation, "negative frame for agent " + t.id.str());
    if (i > 0 && tracks[i - 1].id == t.id) throw Error(ErrorKind::validation, "duplicate agent " + t.id.str());
    for (const auto& p : t.positions)
      if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw Error(ErrorKind::validation, "non-finite coordinate for agent " + t.id.str());
    ds.t_min_ = first ? t.first_frame : std::min(ds.t_min_, t.first_frame);
    ds.t_max_ = first ? t.last_frame() : std::max(ds.t_max_, t.last_frame());
    first = false;
  }
  if (tracks.empty()) throw Error(ErrorKind::validation, "no trajectory points");
  ds.tracks_ = std::move(tracks);
  return ds;
}

std::vector<AgentId> TrajectoryDataset::agents() const {
  std::vector<AgentId> out;
  out.reserve(tracks_.size());
  for (const auto& t : tracks_) out.push_back(t.id);
  return out;
}

std::size_t TrajectoryDataset::point_count() const noexcept {
  std::size_t n = 0;
  for (const auto& t : tracks_) n += t.positions.size();
  return n;
}

const AgentTrack* TrajectoryDataset::find(const AgentId& id) const noexcept {
  auto it = std::lower_bound(tracks_.begin(), tracks_.end(), id,
                             [](const AgentTrack& t, const AgentId& key) { return t.id < key; });
  if (it == tracks_.end() || it->id != id) return nullptr;
  return &*it;
}

std::vector<TrajectoryPoint> TrajectoryDataset::points() const {
  std::vector<TrajectoryPoint> out;
  out.reserve(point_count());
  for (const auto& t : tracks_)
    for (std::size_t k = 0; k < t.positions.size(); ++k)
      out.push_back({t.id, t.first_frame + static_cast<std::int64_t>(k), t.positions[k].x, t.positions[k].y});
  return out;
}

TrajectoryDataset TrajectoryDataset::slice(std::int64_t a, std::int64_t b) const {
  if (a > b) throw Error(ErrorKind::config, "empty analysis range");
  std::vector<AgentTrack> kept;
  for (const auto& t : tracks_) {
    const std::int64_t lo = std::max(a, t.first_frame);
    const std::int64_t hi = std::min(b, t.last_frame());
    if (lo > hi) continue;
    AgentTrack s{t.id, lo, {}};
    s.positions.assign(t.positions.begin() + (lo - t.first_frame), t.positions.begin() + (hi - t.first_frame) + 1);
    kept.push_back(std::move(s));
  }
  if (kept.empty()) throw Error(ErrorKind::range, "analysis range contains no trajectory points");
  return from_tracks(std::move(kept), frame_rate_hz_);
}

std::optional<TrajectoryFormat> format_from_path(std::string_view path) {
  auto ends_with = [&](std::string_view suffix) {
    if (path.size() < suffix.size()) return false;
    auto tail = path.substr(path.size() - suffix.size());
    return std::equal(tail.begin(), tail.end(), suffix.begin(),
                      [](char x, char y) { return std::tolower(static_cast<unsigned char>(x)) == y; });
  };
  if (ends_with(".csv")) return TrajectoryFormat::csv;
  if (ends_with(".json")) return TrajectoryFormat::json;
  return std::nullopt;
}

namespace {

TrajectoryDataset parse_csv(std::string_view source, double frame_rate_hz) {
  std::vector<TrajectoryPoint> points;
  std::size_t line_no = 0;
  bool seen_header = false;
  std::size_t pos = 0;
  while (pos <= source.size()) {
    std::size_t end = source.find('\n', pos);
    if (end == std::string_view::npos) end = source.size();
    std::string_view line = trim(source.substr(pos, end - pos));
    ++line_no;
    pos = end + 1;
    if (line.empty()) continue;
    if (!seen_header) {
      if (line != "agent_id,frame,x,y")
        throw Error(ErrorKind::parse, "expected header 'agent_id,frame,x,y'", line_no);
      seen_header = true;
      continue;
    }
    std::string_view fields[4];
    std::size_t n = 0;
    std::size_t start = 0;
    for (;;) {
      std::size_t comma = line.find(',', start);
      if (n == 4) throw Error(ErrorKind::parse, "expected 4 fields", line_no);
      fields[n++] = trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (n != 4) throw Error(ErrorKind::parse, "expected 4 fields", line_no);
    if (fields[0].empty()) throw Error(ErrorKind::parse, "empty agent_id", line_no);

    TrajectoryPoint p;
    p.agent_id = AgentId(std::string(fields[0]));
    auto fr = std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), p.frame);
    if (fr.ec != std::errc{} || fr.ptr != fields[1].data() + fields[1].size() || p.frame < 0)
      throw Error(ErrorKind::parse, "frame is not a non-negative integer: '" + std::string(fields[1]) + "'", line_no);
    double* coords[2] = {&p.x, &p.y};
    for (int c = 0; c < 2; ++c) {
      const auto f = fields[2 + c];
      auto r = std::from_chars(f.data(), f.data() + f.size(), *coords[c]);
      if (r.ec != std::errc{} || r.ptr != f.data() + f.size() || f.empty())
        throw Error(ErrorKind::parse, "bad coordinate '" + std::string(f) + "'", line_no);
      if (!std::isfinite(*coords[c])) throw Error(ErrorKind::validation, "non-finite coordinate", line_no);
    }
    points.push_back(std::move(p));
  }
  if (!seen_header) throw Error(ErrorKind::validation, "empty input");
  return TrajectoryDataset::from_points(std::move(points), frame_rate_hz);
}

TrajectoryDataset parse_json(std::string_view source, std::optional<double> frame_rate_hz) {
  if (trim(source).empty()) throw Error(ErrorKind::validation, "empty input");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(source.begin(), source.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::parse, e.what());
  }
  if (!doc.is_object() || !doc.contains("points") || !doc["points"].is_array())
    throw Error(ErrorKind::parse, "expected an object with a 'points' array");
  double rate = frame_rate_hz.value_or(kDefaultFrameRateHz);
  if (doc.contains("frame_rate_hz")) {
    const auto& r = doc["frame_rate_hz"];
    if (!r.is_number()) throw Error(ErrorKind::parse, "frame_rate_hz must be a number");
    const double file_rate = r.get<double>();
    if (frame_rate_hz && *frame_rate_hz != file_rate)
      throw Error(ErrorKind::config, "frame rate " + format_double(*frame_rate_hz) +
                                         " Hz disagrees with the file header " + format_double(file_rate) + " Hz");
    rate = file_rate;
  }
  std::vector<TrajectoryPoint> points;
  points.reserve(doc["points"].size());
  std::size_t index = 0;
  for (const auto& item : doc["points"]) {
    const std::string where = "points[" + std::to_string(index++) + "]";
    if (!item.is_object()) throw Error(ErrorKind::parse, where + " is not an object");
    for (const char* key : {"agent_id", "frame", "x", "y"})
      if (!item.contains(key)) throw Error(ErrorKind::parse, where + " lacks '" + key + "'");
    TrajectoryPoint p;
    p.agent_id = detail::agent_from(item["agent_id"]);
    const auto& f = item["frame"];
    if (f.is_number_unsigned()) {
      p.frame = static_cast<std::int64_t>(f.get<std::uint64_t>());
    } else if (f.is_number_integer()) {
      p.frame = f.get<std::int64_t>();
    } else {
      throw Error(ErrorKind::parse, where + ".frame must be an integer");
    }
    if (p.frame < 0) throw Error(ErrorKind::parse, where + ".frame must be non-negative");
    if (!item["x"].is_number() || !item["y"].is_number())
      throw Error(ErrorKind::parse, where + " coordinates must be numbers");
    p.x = item["x"].get<double>();
    p.y = item["y"].get<double>();
    points.push_back(std::move(p));
  }
  return TrajectoryDataset::from_points(std::move(points), rate);
}

}  // namespace

TrajectoryDataset parse_trajectories(std::string_view source, TrajectoryFormat format,
                                     std::optional<double> frame_rate_hz) {
  if (frame_rate_hz) check_rate(*frame_rate_hz);
  if (format == TrajectoryFormat::csv) return parse_csv(source, frame_rate_hz.value_or(kDefaultFrameRateHz));
  return parse_json(source, frame_rate_hz);
}

std::string write_trajectories(const TrajectoryDataset& ds, TrajectoryFormat format) {
  std::string out;
  if (format == TrajectoryFormat::csv) {
    out = "agent_id,frame,x,y\n";
    for (const auto& t : ds.tracks())
      for (std::size_t k = 0; k < t.positions.size(); ++k) {
        out += t.id.str();
        out += ',';
        out += std::to_string(t.first_frame + static_cast<std::int64_t>(k));
        out += ',';
        out += format_double(t.positions[k].x);
        out += ',';
        out += format_double(t.positions[k].y);
        out += '\n';
      }
    return out;
  }
  nlohmann::ordered_json doc;
  doc["frame_rate_hz"] = ds.frame_rate_hz();
  auto& pts = doc["points"] = nlohmann::ordered_json::array();
  for (const auto& t : ds.tracks())
    for (std::size_t k = 0; k < t.positions.size(); ++k) {
      nlohmann::ordered_json p;
      p["agent_id"] = detail::agent_json(t.id);
      p["frame"] = t.first_frame + static_cast<std::int64_t>(k);
      p["x"] = t.positions[k].x;
      p["y"] = t.positions[k].y;
      pts.push_back(std::move(p));
    }
  out = doc.dump();
  out += '\n';
  return out;
}

std::vector<double> track_speeds(const AgentTrack& track, double frame_rate_hz) {
  const std::size_t n = track.positions.size();
  std::vector<double> speed(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    const double dx = track.positions[k].x - track.positions[k - 1].x;
    const double dy = track.positions[k].y - track.positions[k - 1].y;
    speed[k] = std::sqrt(dx * dx + dy * dy) * frame_rate_hz;
  }
  if (n > 1) speed[0] = speed[1];
  return speed;
}

std::vector<VelocityEstimate> estimate_velocities(const TrajectoryDataset& ds) {
  std::vector<VelocityEstimate> out;
  out.reserve(ds.point_count());
  for (const auto& t : ds.tracks()) {
    const auto s = track_speeds(t, ds.frame_rate_hz());
    for (std::size_t k = 0; k < s.size(); ++k) out.push_back({t.id, t.first_frame + static_cast<std::int64_t>(k), s[k]});
  }
  return out;
}

}  // namespace cmetric
