#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "cmetric/ingest.hpp"

namespace cmetric {

inline constexpr double kDefaultMu = 10.0;
inline constexpr std::size_t kDefaultNMax = 256;

// One snapshot of the dynamic geometric graph.
struct FrameGraph {
  std::int64_t frame = 0;
  double mu = kDefaultMu;
  std::vector<AgentId> agents;   // vertex order
  std::vector<Vec2> positions;
  Eigen::MatrixXd adjacency;     // symmetric, zero diagonal, entries in meters

  std::size_t size() const noexcept { return agents.size(); }
  std::optional<std::size_t> index_of(const AgentId& id) const noexcept;
  std::vector<std::size_t> neighbors(std::size_t i) const;
};

FrameGraph build_frame_graph(const TrajectoryDataset& ds, std::int64_t frame, double mu);
// Same construction from explicit vertices.
FrameGraph build_frame_graph(std::int64_t frame, std::vector<AgentId> agents, std::vector<Vec2> positions, double mu);

Eigen::MatrixXd degree_matrix(const FrameGraph& g);
Eigen::MatrixXd laplacian(const FrameGraph& g);

// Union Laplacian over a stream of frames. Agents get indices in
// first-appearance order; an edge once seen stays, carrying its latest weight.
struct LaplacianState {
  Eigen::MatrixXd L;
  std::size_t active_count = 0;
  std::size_t n_max = kDefaultNMax;
  std::vector<AgentId> index_to_agent;
  std::unordered_map<AgentId, std::size_t> agent_to_index;

  static LaplacianState zero(std::size_t n_max = kDefaultNMax);
  std::optional<std::size_t> index_of(const AgentId& id) const noexcept;
};

// Agents of g that have no index in state yet.
std::set<AgentId> new_agents(const LaplacianState& state, const FrameGraph& g);

// Appends new agents, refreshes the edges of g and recomputes the diagonal
// from the retained off-diagonal entries. Resets to zero first when the
// active count would exceed n_max.
[[nodiscard]] LaplacianState update_laplacian(LaplacianState state, const FrameGraph& g, const std::set<AgentId>& new_agents);

}  // namespace cmetric
