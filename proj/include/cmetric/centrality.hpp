#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <unordered_map>
#include <vector>

#include "cmetric/graph.hpp"
#include "cmetric/ingest.hpp"

namespace cmetric {

// |R| / sum of shortest-path costs to the reachable set R; 0 when isolated.
double closeness_at(const FrameGraph& g, const AgentId& agent);
double closeness_at_index(const FrameGraph& g, std::size_t i);

struct NeighborHistory {
  AgentId agent_id;
  std::set<AgentId> ever_adjacent;
};

struct DegreeStep {
  std::int64_t value = 0;
  NeighborHistory history;
};

// Adds the never-before-adjacent neighbours that are not faster than the
// agent. Every current neighbour joins the history, counted or not.
DegreeStep degree_step(NeighborHistory history, const FrameGraph& g,
                       const std::unordered_map<AgentId, double>& speeds, std::int64_t prev_value);

struct CentralitySeries {
  AgentId agent_id;
  std::int64_t first_frame = 0;
  std::int64_t last_frame = -1;
  std::vector<double> closeness;
  std::vector<std::int64_t> degree;

  std::size_t size() const noexcept { return closeness.size(); }
};

std::map<AgentId, CentralitySeries> compute_series(const TrajectoryDataset& ds, double mu);

}  // namespace cmetric
