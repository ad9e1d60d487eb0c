#include "cmetric/graph.hpp"

#include <cmath>
#include <string>

#include "cmetric/error.hpp"
#include "cmetric/simd.hpp"

namespace cmetric {

std::optional<std::size_t> FrameGraph::index_of(const AgentId& id) const noexcept {
  for (std::size_t i = 0; i < agents.size(); ++i)
    if (agents[i] == id) return i;
  return std::nullopt;
}

std::vector<std::size_t> FrameGraph::neighbors(std::size_t i) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < size(); ++j)
    if (adjacency(i, j) != 0.0) out.push_back(j);
  return out;
}

FrameGraph build_frame_graph(std::int64_t frame, std::vector<AgentId> agents, std::vector<Vec2> positions, double mu) {
  if (!std::isfinite(mu) || mu <= 0.0) throw Error(ErrorKind::parameter, "mu must be positive and finite");
  if (agents.size() != positions.size()) throw Error(ErrorKind::internal, "agent and position counts differ");
  const std::size_t n = agents.size();
  FrameGraph g;
  g.frame = frame;
  g.mu = mu;
  g.agents = std::move(agents);
  g.positions = std::move(positions);
  g.adjacency = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = g.positions[i].x;
    ys[i] = g.positions[i].y;
  }
  // Column-major storage: row i of the symmetric matrix is column i.
  for (std::size_t i = 0; i < n; ++i) simd::adjacency_row(xs.data(), ys.data(), n, i, mu, g.adjacency.col(static_cast<Eigen::Index>(i)).data());
  return g;
}

FrameGraph build_frame_graph(const TrajectoryDataset& ds, std::int64_t frame, double mu) {
  if (frame < ds.t_min() || frame > ds.t_max())
    throw Error(ErrorKind::range, "frame " + std::to_string(frame) + " outside [" + std::to_string(ds.t_min()) + ", " +
                                      std::to_string(ds.t_max()) + "]");
  std::vector<AgentId> agents;
  std::vector<Vec2> positions;
  for (const auto& t : ds.tracks())
    if (t.covers(frame)) {
      agents.push_back(t.id);
      positions.push_back(t.at(frame));
    }
  return build_frame_graph(frame, std::move(agents), std::move(positions), mu);
}

Eigen::MatrixXd degree_matrix(const FrameGraph& g) {
  const auto n = g.adjacency.rows();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) s += g.adjacency(i, j);
    d(i, i) = s;
  }
  return d;
}

Eigen::MatrixXd laplacian(const FrameGraph& g) { return degree_matrix(g) - g.adjacency; }

LaplacianState LaplacianState::zero(std::size_t n_max) {
  if (n_max == 0) throw Error(ErrorKind::parameter, "n_max must be positive");
  LaplacianState s;
  s.n_max = n_max;
  s.L = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_max), static_cast<Eigen::Index>(n_max));
  return s;
}

std::optional<std::size_t> LaplacianState::index_of(const AgentId& id) const noexcept {
  auto it = agent_to_index.find(id);
  if (it == agent_to_index.end()) return std::nullopt;
  return it->second;
}

std::set<AgentId> new_agents(const LaplacianState& state, const FrameGraph& g) {
  std::set<AgentId> out;
  for (const auto& a : g.agents)
    if (!state.index_of(a)) out.insert(a);
  return out;
}

LaplacianState update_laplacian(LaplacianState state, const FrameGraph& g, const std::set<AgentId>& fresh) {
  if (state.L.rows() != static_cast<Eigen::Index>(state.n_max)) state = LaplacianState::zero(state.n_max);
  if (g.size() > state.n_max)
    throw Error(ErrorKind::parameter, "frame " + std::to_string(g.frame) + " has more agents than n_max");
  for (const auto& a : fresh) {
    if (!g.index_of(a)) throw Error(ErrorKind::parameter, "new agent " + a.str() + " is not in the frame graph");
    if (state.index_of(a)) throw Error(ErrorKind::parameter, "agent " + a.str() + " already has an index");
  }
  for (const auto& a : g.agents)
    if (!state.index_of(a) && !fresh.count(a))
      throw Error(ErrorKind::parameter, "agent " + a.str() + " is neither indexed nor declared new");

  if (state.active_count + fresh.size() > state.n_max) state = LaplacianState::zero(state.n_max);
  for (const auto& a : g.agents)
    if (!state.index_of(a)) {
      state.agent_to_index.emplace(a, state.active_count);
      state.index_to_agent.push_back(a);
      ++state.active_count;
    }

  std::vector<std::size_t> idx(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) idx[i] = *state.index_of(g.agents[i]);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j) {
      const double w = g.adjacency(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (w == 0.0) continue;
      const auto a = static_cast<Eigen::Index>(idx[i]);
      const auto b = static_cast<Eigen::Index>(idx[j]);
      state.L(a, b) = -w;
      state.L(b, a) = -w;
    }
  const auto n = static_cast<Eigen::Index>(state.active_count);
  for (Eigen::Index a = 0; a < n; ++a) {
    double s = 0.0;
    for (Eigen::Index b = 0; b < n; ++b)
      if (b != a) s += -state.L(a, b);
    state.L(a, a) = s;
  }
  return state;
}

}  // namespace cmetric
