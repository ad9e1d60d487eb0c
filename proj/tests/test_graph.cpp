#include <doctest.h>

#include "cmetric/error.hpp"
#include "cmetric/graph.hpp"
#include "oracles.hpp"

using namespace cmetric;

namespace {
FrameGraph graph_of(const std::vector<Vec2>& pos, double mu, std::int64_t frame = 0) {
  std::vector<AgentId> ids;
  for (std::size_t i = 0; i < pos.size(); ++i) ids.emplace_back(static_cast<std::uint64_t>(i));
  return build_frame_graph(frame, ids, pos, mu);
}

FrameGraph graph_of(const oracle::Frame& f, double mu) {
  std::vector<AgentId> ids;
  for (const auto& a : f.agents) ids.emplace_back(a);
  return build_frame_graph(0, ids, f.pos, mu);
}
}  // namespace

TEST_CASE("edge threshold is strict") {
  CHECK(graph_of({{0, 0}, {5, 0}}, 10).adjacency(0, 1) == 5.0);
  CHECK(graph_of({{0, 0}, {12, 0}}, 10).adjacency(0, 1) == 0.0);
  CHECK(graph_of({{0, 0}, {10, 0}}, 10).adjacency(0, 1) == 0.0);
  CHECK(graph_of({{1, 1}, {1, 1}}, 10).adjacency(0, 1) == 0.0);  // coincident: d = 0
}

TEST_CASE("adjacency matches brute force on random boxes") {
  oracle::Rng rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const auto pos = oracle::random_points(rng, 10, 50.0);
    const auto g = graph_of(pos, 20.0);
    const auto ref = oracle::adjacency(pos, 20.0);
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 10; ++j) {
        CHECK(g.adjacency(i, j) == g.adjacency(j, i));
        CHECK(g.adjacency(i, j) == doctest::Approx(ref[i][j]).epsilon(1e-14));
      }
  }
}

TEST_CASE("dataset frame selection") {
  auto ds = parse_trajectories("agent_id,frame,x,y\n0,0,0,0\n0,1,0,0\n1,1,3,4\n", TrajectoryFormat::csv);
  CHECK(build_frame_graph(ds, 0, 10).size() == 1);
  const auto g = build_frame_graph(ds, 1, 10);
  CHECK(g.size() == 2);
  CHECK(g.adjacency(0, 1) == 5.0);
  CHECK_THROWS_AS(build_frame_graph(ds, 2, 10), Error);
  CHECK_THROWS_AS(build_frame_graph(ds, 0, 0.0), Error);
}

TEST_CASE("degree matrix and laplacian") {
  const auto empty = graph_of({{0, 0}, {50, 0}}, 10);
  CHECK(degree_matrix(empty).isZero());
  CHECK(laplacian(empty).isZero());
  const auto one = graph_of({{0, 0}, {5, 0}}, 10);
  Eigen::Matrix2d expect;
  expect << 5, -5, -5, 5;
  CHECK(laplacian(one) == expect);
  CHECK(degree_matrix(one)(0, 0) == 5.0);
  CHECK(degree_matrix(one)(1, 1) == 5.0);

  oracle::Rng rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = rng.integer(2, 12);
    const auto g = graph_of(oracle::random_points(rng, n, 50.0), 20.0);
    const auto l = laplacian(g);
    for (int i = 0; i < n; ++i) {
      double off = 0.0, rowsum = 0.0;
      for (int j = 0; j < n; ++j)
        if (j != i) off += g.adjacency(i, j);
      for (int j = 0; j < n; ++j)
        if (j != i) rowsum += l(i, j);
      rowsum += l(i, i);
      CHECK(rowsum == 0.0);
      CHECK(l(i, i) == off);
      for (int j = 0; j < n; ++j)
        if (j != i) CHECK(l(i, j) == -g.adjacency(i, j));
    }
  }
}

TEST_CASE("update_laplacian") {
  SUBCASE("first frame reduces to laplacian") {
    auto s = LaplacianState::zero(8);
    const auto g = graph_of({{0, 0}, {5, 0}}, 10);
    s = update_laplacian(s, g, new_agents(s, g));
    CHECK(s.active_count == 2);
    CHECK(s.L(0, 0) == 5.0);
    CHECK(s.L(0, 1) == -5.0);
    CHECK(s.L(1, 0) == -5.0);
    CHECK(s.L(1, 1) == 5.0);
    CHECK(s.L.block(2, 0, 6, 8).isZero());
  }

  SUBCASE("newcomer adds one row and column") {
    auto s = LaplacianState::zero(8);
    auto g = graph_of({{0, 0}, {30, 0}}, 10);
    s = update_laplacian(s, g, new_agents(s, g));
    const Eigen::MatrixXd before = s.L;
    std::vector<AgentId> ids{AgentId(0u), AgentId(1u), AgentId(2u)};
    g = build_frame_graph(1, ids, {{0, 0}, {30, 0}, {34, 0}}, 10);
    s = update_laplacian(s, g, new_agents(s, g));
    const Eigen::MatrixXd delta = s.L - before;
    int rows = 0;
    for (int i = 0; i < 8; ++i) rows += delta.row(i).isZero() ? 0 : 1;
    CHECK(rows == 2);
    CHECK(s.L(1, 2) == -4.0);
  }

  SUBCASE("scripted joins equal the from-scratch union") {
    std::vector<oracle::Frame> frames = {
        {{"a", "b"}, {{0, 0}, {6, 0}}},
        {{"a", "b", "c"}, {{0, 0}, {15, 0}, {7, 3}}},
        {{"a", "b", "c", "d"}, {{1, 0}, {16, 0}, {7, 3}, {12, 5}}},
    };
    auto s = LaplacianState::zero(6);
    for (const auto& f : frames) {
      const auto g = graph_of(f, 10.0);
      s = update_laplacian(s, g, new_agents(s, g));
    }
    const auto ref = oracle::union_laplacian(frames, 10.0, 6);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) CHECK(s.L(i, j) == ref[i][j]);
    // a-b left range in frame 2 and keeps its weight 6.
    CHECK(s.L(0, 1) == -6.0);
  }

  SUBCASE("reset when capacity is exceeded") {
    auto s = LaplacianState::zero(3);
    auto g = graph_of({{0, 0}, {5, 0}, {9, 0}}, 10);
    s = update_laplacian(s, g, new_agents(s, g));
    CHECK(s.active_count == 3);
    std::vector<AgentId> ids{AgentId(7u), AgentId(8u)};
    g = build_frame_graph(1, ids, {{0, 0}, {2, 0}}, 10);
    s = update_laplacian(s, g, new_agents(s, g));
    CHECK(s.active_count == 2);
    CHECK(s.index_of(AgentId(7u)) == std::optional<std::size_t>(0));
    CHECK(s.L(0, 1) == -2.0);
    CHECK(s.L(2, 2) == 0.0);
  }

  SUBCASE("deterministic and edge-retaining") {
    oracle::Rng rng(3);
    std::vector<oracle::Frame> frames;
    for (int f = 0; f < 12; ++f) {
      oracle::Frame fr;
      for (int a = 0; a < 6; ++a) {
        fr.agents.push_back(std::to_string(a));
        fr.pos.push_back({rng.uniform(0, 30), rng.uniform(0, 30)});
      }
      frames.push_back(fr);
    }
    auto run = [&] {
      auto s = LaplacianState::zero(16);
      std::vector<Eigen::MatrixXd> states;
      for (const auto& f : frames) {
        const auto g = graph_of(f, 10.0);
        s = update_laplacian(s, g, new_agents(s, g));
        states.push_back(s.L);
      }
      return states;
    };
    const auto a = run(), b = run();
    for (std::size_t t = 0; t < a.size(); ++t) CHECK(a[t] == b[t]);
    for (std::size_t t = 1; t < a.size(); ++t)
      for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j)
          if (i != j && a[t - 1](i, j) != 0.0) CHECK(a[t](i, j) != 0.0);
  }

  SUBCASE("inconsistent new-agent set is rejected") {
    auto s = LaplacianState::zero(4);
    const auto g = graph_of({{0, 0}, {5, 0}}, 10);
    CHECK_THROWS_AS(update_laplacian(s, g, {}), Error);
  }
}
