#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cmetric {

// Opaque agent identifier. Canonical non-negative integers sort by value and
// come before any other id; the rest sort lexicographically.
class AgentId {
 public:
  AgentId() = default;
  explicit AgentId(std::string value) : value_(std::move(value)) {}
  explicit AgentId(std::uint64_t value) : value_(std::to_string(value)) {}

  const std::string& str() const noexcept { return value_; }
  bool is_numeric() const noexcept;

  friend bool operator==(const AgentId&, const AgentId&) = default;
  friend std::strong_ordering operator<=>(const AgentId& a, const AgentId& b) noexcept;

 private:
  std::string value_;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct TrajectoryPoint {
  AgentId agent_id;
  std::int64_t frame = 0;
  double x = 0.0;
  double y = 0.0;
};

// One agent over its contiguous frame interval.
struct AgentTrack {
  AgentId id;
  std::int64_t first_frame = 0;
  std::vector<Vec2> positions;

  std::int64_t last_frame() const noexcept {
    return first_frame + static_cast<std::int64_t>(positions.size()) - 1;
  }
  bool covers(std::int64_t frame) const noexcept {
    return frame >= first_frame && frame <= last_frame();
  }
  const Vec2& at(std::int64_t frame) const { return positions.at(static_cast<std::size_t>(frame - first_frame)); }
};

class TrajectoryDataset {
 public:
  // Validates uniqueness, contiguity, finiteness and the frame rate.
  static TrajectoryDataset from_points(std::vector<TrajectoryPoint> points, double frame_rate_hz);
  static TrajectoryDataset from_tracks(std::vector<AgentTrack> tracks, double frame_rate_hz);

  double frame_rate_hz() const noexcept { return frame_rate_hz_; }
  const std::vector<AgentTrack>& tracks() const noexcept { return tracks_; }
  std::vector<AgentId> agents() const;
  std::int64_t t_min() const noexcept { return t_min_; }
  std::int64_t t_max() const noexcept { return t_max_; }
  std::size_t point_count() const noexcept;

  const AgentTrack* find(const AgentId& id) const noexcept;
  // Points ordered by agent, then frame.
  std::vector<TrajectoryPoint> points() const;
  // Restriction to frames [a, b]; agents with no frame inside are dropped.
  TrajectoryDataset slice(std::int64_t a, std::int64_t b) const;

 private:
  TrajectoryDataset() = default;

  double frame_rate_hz_ = 10.0;
  std::vector<AgentTrack> tracks_;
  std::int64_t t_min_ = 0;
  std::int64_t t_max_ = -1;
};

struct VelocityEstimate {
  AgentId agent_id;
  std::int64_t frame = 0;
  double speed = 0.0;  // m/s
};

enum class TrajectoryFormat { csv, json };

std::optional<TrajectoryFormat> format_from_path(std::string_view path);

inline constexpr double kDefaultFrameRateHz = 10.0;

// A JSON header rate is used when `frame_rate_hz` is empty; if both are given
// they must agree. CSV falls back to kDefaultFrameRateHz.
TrajectoryDataset parse_trajectories(std::string_view source, TrajectoryFormat format,
                                     std::optional<double> frame_rate_hz = std::nullopt);

std::string write_trajectories(const TrajectoryDataset& ds, TrajectoryFormat format);

// Backward-difference speed; the first frame copies the forward difference.
std::vector<VelocityEstimate> estimate_velocities(const TrajectoryDataset& ds);
std::vector<double> track_speeds(const AgentTrack& track, double frame_rate_hz);

}  // namespace cmetric

template <>
struct std::hash<cmetric::AgentId> {
  std::size_t operator()(const cmetric::AgentId& id) const noexcept { return std::hash<std::string>{}(id.str()); }
};
