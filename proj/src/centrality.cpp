#include "cmetric/centrality.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <string>

#include "cmetric/error.hpp"
#include "parallel.hpp"

namespace cmetric {

double closeness_at_index(const FrameGraph& g, std::size_t source) {
  const std::size_t n = g.size();
  if (source >= n) throw Error(ErrorKind::not_present, "vertex index out of range");
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, inf);
  std::vector<char> done(n, 0);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[source] = 0.0;
  pq.push({0.0, source});
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (done[u]) continue;
    done[u] = 1;
    for (std::size_t v = 0; v < n; ++v) {
      const double w = g.adjacency(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v));
      if (w == 0.0 || done[v]) continue;
      const double nd = d + w;
      if (nd < dist[v]) {
        dist[v] = nd;
        pq.push({nd, v});
      }
    }
  }
  std::size_t reachable = 0;
  double total = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    if (v == source || dist[v] == inf) continue;
    ++reachable;
    total += dist[v];
  }
  if (reachable == 0) return 0.0;
  return static_cast<double>(reachable) / total;
}

double closeness_at(const FrameGraph& g, const AgentId& agent) {
  const auto i = g.index_of(agent);
  if (!i) throw Error(ErrorKind::not_present, "agent " + agent.str() + " is not present at frame " + std::to_string(g.frame));
  return closeness_at_index(g, *i);
}

DegreeStep degree_step(NeighborHistory history, const FrameGraph& g,
                       const std::unordered_map<AgentId, double>& speeds, std::int64_t prev_value) {
  const auto i = g.index_of(history.agent_id);
  if (!i) throw Error(ErrorKind::not_present, "agent " + history.agent_id.str() + " is not present at frame " + std::to_string(g.frame));
  auto speed_of = [&](const AgentId& a) {
    auto it = speeds.find(a);
    if (it == speeds.end())
      throw Error(ErrorKind::internal, "no speed for agent " + a.str() + " at frame " + std::to_string(g.frame));
    return it->second;
  };
  const double own = speed_of(history.agent_id);
  std::int64_t count = 0;
  for (std::size_t j : g.neighbors(*i)) {
    const AgentId& other = g.agents[j];
    const double sj = speed_of(other);
    if (sj <= own && !history.ever_adjacent.count(other)) ++count;
  }
  for (std::size_t j : g.neighbors(*i)) history.ever_adjacent.insert(g.agents[j]);
  return {prev_value + count, std::move(history)};
}

std::map<AgentId, CentralitySeries> compute_series(const TrajectoryDataset& ds, double mu) {
  const auto& tracks = ds.tracks();
  const std::size_t n_frames = static_cast<std::size_t>(ds.t_max() - ds.t_min() + 1);

  std::vector<std::vector<double>> speeds(tracks.size());
  std::map<AgentId, CentralitySeries> out;
  for (std::size_t k = 0; k < tracks.size(); ++k) {
    speeds[k] = track_speeds(tracks[k], ds.frame_rate_hz());
    CentralitySeries s;
    s.agent_id = tracks[k].id;
    s.first_frame = tracks[k].first_frame;
    s.last_frame = tracks[k].last_frame();
    s.closeness.assign(tracks[k].positions.size(), 0.0);
    s.degree.assign(tracks[k].positions.size(), 0);
    out.emplace(tracks[k].id, std::move(s));
  }

  std::map<AgentId, NeighborHistory> histories;
  for (const auto& t : tracks) histories[t.id] = NeighborHistory{t.id, {}};

  // Graphs and closeness are independent per frame and built in parallel one
  // block at a time; the degree recurrence then walks the block in frame order.
  constexpr std::size_t kBlock = 256;
  std::vector<FrameGraph> graphs;
  std::vector<std::vector<double>> closeness;
  for (std::size_t base = 0; base < n_frames; base += kBlock) {
    const std::size_t count = std::min(kBlock, n_frames - base);
    graphs.assign(count, FrameGraph{});
    closeness.assign(count, {});
    detail::parallel_for(count, [&](std::size_t f) {
      graphs[f] = build_frame_graph(ds, ds.t_min() + static_cast<std::int64_t>(base + f), mu);
      closeness[f].resize(graphs[f].size());
      for (std::size_t i = 0; i < graphs[f].size(); ++i) closeness[f][i] = closeness_at_index(graphs[f], i);
    });

    for (std::size_t f = 0; f < count; ++f) {
      const FrameGraph& g = graphs[f];
      const std::int64_t frame = g.frame;
      std::unordered_map<AgentId, double> frame_speeds;
      for (std::size_t k = 0; k < tracks.size(); ++k)
        if (tracks[k].covers(frame))
          frame_speeds.emplace(tracks[k].id, speeds[k][static_cast<std::size_t>(frame - tracks[k].first_frame)]);
      for (std::size_t i = 0; i < g.size(); ++i) {
        auto& s = out.at(g.agents[i]);
        const auto pos = static_cast<std::size_t>(frame - s.first_frame);
        s.closeness[pos] = closeness[f][i];
        const std::int64_t prev = pos == 0 ? 0 : s.degree[pos - 1];
        auto step = degree_step(std::move(histories[g.agents[i]]), g, frame_speeds, prev);
        s.degree[pos] = step.value;
        histories[g.agents[i]] = std::move(step.history);
      }
    }
  }
  return out;
}

}  // namespace cmetric
