#pragma once

// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls into the library's numeric code.

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "cmetric/ingest.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : e_(seed) {}
  double uniform(double a, double b) { return a + (b - a) * (static_cast<double>(e_() >> 11) * 0x1.0p-53); }
  int integer(int lo, int hi) { return lo + static_cast<int>(e_() % static_cast<std::uint64_t>(hi - lo + 1)); }

 private:
  std::mt19937_64 e_;
};

inline std::vector<cmetric::Vec2> random_points(Rng& rng, int n, double box) {
  std::vector<cmetric::Vec2> p(static_cast<std::size_t>(n));
  for (auto& v : p) v = {rng.uniform(0.0, box), rng.uniform(0.0, box)};
  return p;
}

inline Matrix adjacency(const std::vector<cmetric::Vec2>& p, double mu) {
  const std::size_t n = p.size();
  Matrix a(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double d = std::hypot(p[i].x - p[j].x, p[i].y - p[j].y);
      if (i != j && d > 0.0 && d < mu) a[i][j] = d;
    }
  return a;
}

// Floyd-Warshall all pairs.
inline Matrix all_pairs(const Matrix& a) {
  const std::size_t n = a.size();
  const double inf = std::numeric_limits<double>::infinity();
  Matrix d(n, std::vector<double>(n, inf));
  for (std::size_t i = 0; i < n; ++i) {
    d[i][i] = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (a[i][j] != 0.0) d[i][j] = a[i][j];
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  return d;
}

inline double closeness(const Matrix& dist, std::size_t i) {
  double total = 0.0;
  int reach = 0;
  for (std::size_t j = 0; j < dist.size(); ++j)
    if (j != i && std::isfinite(dist[i][j])) {
      total += dist[i][j];
      ++reach;
    }
  return reach == 0 ? 0.0 : reach / total;
}

// A frame of a scripted stream: agent labels and positions.
struct Frame {
  std::vector<std::string> agents;
  std::vector<cmetric::Vec2> pos;
};

// Union Laplacian built from scratch: indices by first appearance, each edge
// keeps the weight of its latest occurrence; diagonal = sum of -offdiagonal.
inline Matrix union_laplacian(const std::vector<Frame>& frames, double mu, std::size_t n_max) {
  std::map<std::string, std::size_t> index;
  std::map<std::pair<std::size_t, std::size_t>, double> weight;
  for (const auto& f : frames) {
    for (const auto& a : f.agents)
      if (!index.count(a)) {
        const std::size_t next = index.size();
        index[a] = next;
      }
    const auto adj = adjacency(f.pos, mu);
    for (std::size_t i = 0; i < f.agents.size(); ++i)
      for (std::size_t j = 0; j < f.agents.size(); ++j)
        if (adj[i][j] != 0.0) weight[{index[f.agents[i]], index[f.agents[j]]}] = adj[i][j];
  }
  Matrix l(n_max, std::vector<double>(n_max, 0.0));
  for (const auto& [ij, w] : weight) l[ij.first][ij.second] = -w;
  const std::size_t n = index.size();
  for (std::size_t a = 0; a < n; ++a) {
    double s = 0.0;
    for (std::size_t b = 0; b < n; ++b)
      if (b != a) s += -l[a][b];
    l[a][a] = s;
  }
  return l;
}

// Speed by backward difference, forward difference at the first frame.
inline double speed(const cmetric::AgentTrack& t, std::int64_t frame, double fps) {
  const std::size_t n = t.positions.size();
  if (n < 2) return 0.0;
  std::size_t k = static_cast<std::size_t>(frame - t.first_frame);
  if (k == 0) k = 1;
  return std::hypot(t.positions[k].x - t.positions[k - 1].x, t.positions[k].y - t.positions[k - 1].y) * fps;
}

// Degree series straight from the definition, re-deriving every prior edge
// by scanning all earlier frames.
inline std::map<std::string, std::vector<std::int64_t>> degree_series(const cmetric::TrajectoryDataset& ds, double mu) {
  std::map<std::string, std::vector<std::int64_t>> out;
  const auto& tr = ds.tracks();
  auto adjacent = [&](std::size_t a, std::size_t b, std::int64_t f) {
    if (!tr[a].covers(f) || !tr[b].covers(f)) return false;
    const auto& p = tr[a].at(f);
    const auto& q = tr[b].at(f);
    const double d = std::hypot(p.x - q.x, p.y - q.y);
    return d > 0.0 && d < mu;
  };
  for (std::size_t i = 0; i < tr.size(); ++i) {
    std::vector<std::int64_t> s;
    std::int64_t acc = 0;
    for (std::int64_t f = tr[i].first_frame; f <= tr[i].last_frame(); ++f) {
      for (std::size_t j = 0; j < tr.size(); ++j) {
        if (j == i || !adjacent(i, j, f)) continue;
        bool before = false;
        for (std::int64_t g = ds.t_min(); g < f && !before; ++g) before = adjacent(i, j, g);
        if (!before && speed(tr[j], f, ds.frame_rate_hz()) <= speed(tr[i], f, ds.frame_rate_hz())) ++acc;
      }
      s.push_back(acc);
    }
    out[tr[i].id.str()] = std::move(s);
  }
  return out;
}

// Random dataset: agents with random contiguous lifetimes wandering in a box.
inline cmetric::TrajectoryDataset random_dataset(Rng& rng, int agents, int frames, double box, double fps = 10.0) {
  std::vector<cmetric::TrajectoryPoint> pts;
  for (int a = 0; a < agents; ++a) {
    const int start = rng.integer(0, frames / 2);
    const int len = rng.integer(1, frames - start);
    double x = rng.uniform(0.0, box), y = rng.uniform(0.0, box);
    const double vx = rng.uniform(-2.0, 2.0), vy = rng.uniform(-0.5, 0.5);
    for (int f = start; f < start + len; ++f) {
      pts.push_back({cmetric::AgentId(static_cast<std::uint64_t>(a)), f, x, y});
      x += vx + rng.uniform(-0.3, 0.3);
      y += vy + rng.uniform(-0.3, 0.3);
    }
  }
  return cmetric::TrajectoryDataset::from_points(std::move(pts), fps);
}

}  // namespace oracle
