#include <doctest.h>

#include "ost/error.hpp"
#include "ost/generators.hpp"
#include "ost/metric.hpp"
#include "test_support.hpp"

using namespace ost;
using testing::path_graph;

namespace {

/// Independent check of the mis contract against a full distance matrix.
void check_mis_contract(const WeightedGraph& g, const NodeSet& seed, Weight d, const NodeSet& result) {
  auto dist = testing::floyd_warshall(g);
  auto in = [&](const NodeSet& s, NodeId v) { return std::binary_search(s.begin(), s.end(), v); };
  for (NodeId h : seed) REQUIRE(in(result, h));
  for (NodeId u : result) {
    if (in(seed, u)) continue;
    for (NodeId v : result)
      if (v != u) REQUIRE(dist[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] >= d);
  }
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (in(result, v)) continue;
    Weight best = kInfinity;
    for (NodeId u : result) best = std::min(best, dist[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)]);
    REQUIRE(best < d);
  }
}

}  // namespace

TEST_CASE("shortest_path on a path graph") {
  auto g = path_graph(5);
  auto p = shortest_path(g, 0, 4);
  CHECK(p.nodes == std::vector<NodeId>{0, 1, 2, 3, 4});
  CHECK(p.length == 4);
  auto self = shortest_path(g, 3, 3);
  CHECK(self.nodes == std::vector<NodeId>{3});
  CHECK(self.length == 0);
}

TEST_CASE("shortest_path follows the smallest-predecessor rule") {
  auto g = generate_grid(3, 3, 1);
  auto d = testing::floyd_warshall(g);
  auto expected = testing::pick_by_predecessor_rule(testing::all_shortest_paths(g, d, 0, 8));
  auto p = shortest_path(g, 0, 8);
  CHECK(p.length == 4);
  CHECK(p.nodes == expected);
  CHECK(p.nodes == std::vector<NodeId>{0, 1, 2, 5, 8});
}

TEST_CASE("shortest_path property: optimal, simple, rule-consistent") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    auto g = generate_random_connected(14, 0.25, 3, seed);
    auto d = testing::floyd_warshall(g);
    for (NodeId u = 0; u < g.node_count(); u += 3)
      for (NodeId v = 0; v < g.node_count(); ++v) {
        auto p = shortest_path(g, u, v);
        REQUIRE(p.length == d[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)]);
        Weight len = 0;
        for (std::size_t k = 1; k < p.nodes.size(); ++k) {
          REQUIRE(g.has_edge(p.nodes[k - 1], p.nodes[k]));
          len += g.edge_weight(p.nodes[k - 1], p.nodes[k]);
        }
        REQUIRE(len == p.length);
        auto sorted = p.nodes;
        std::sort(sorted.begin(), sorted.end());
        REQUIRE(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
        REQUIRE(p.nodes == testing::pick_by_predecessor_rule(testing::all_shortest_paths(g, d, u, v)));
      }
  }
}

TEST_CASE("nearest_in_set") {
  auto p5 = path_graph(5);
  CHECK(nearest_in_set(p5, 2, std::vector<NodeId>{0, 4}) == NodeSet{0, 4});
  CHECK(nearest_in_set(p5, 3, std::vector<NodeId>{0, 3, 4}) == NodeSet{3});
  auto grid = generate_grid(3, 3, 1);
  CHECK(nearest_in_set(grid, 4, std::vector<NodeId>{0, 2, 6, 8}) == NodeSet{0, 2, 6, 8});
  CHECK_THROWS_AS(nearest_in_set(grid, 4, std::vector<NodeId>{}), ValidationError);
}

TEST_CASE("neighborhood") {
  auto p5 = path_graph(5);
  CHECK(neighborhood(p5, 2, 0) == NodeSet{2});
  CHECK(neighborhood(p5, 2, 1) == NodeSet{1, 2, 3});
  auto grid = generate_grid(3, 3, 1);
  CHECK(neighborhood(grid, 0, 2) == NodeSet{0, 1, 2, 3, 4, 6});
}

TEST_CASE("mis examples") {
  auto p5 = path_graph(5);
  CHECK(mis(p5, std::vector<NodeId>{}, 2) == NodeSet{0, 2, 4});
  CHECK(mis(p5, std::vector<NodeId>{4}, 2) == NodeSet{0, 2, 4});
  auto g = generate_random_connected(20, 0.2, 4, 3);
  NodeSet all(20);
  std::iota(all.begin(), all.end(), 0);
  CHECK(mis(g, std::vector<NodeId>{}, 1) == all);
  CHECK(mis(g, std::vector<NodeId>{5, 7}, 1) == all);
}

TEST_CASE("mis property: contract, maximality, idempotence") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto g = generate_random_connected(18, 0.2, 5, seed);
    Rng rng(seed);
    NodeSet h;
    for (NodeId v = 0; v < g.node_count(); ++v)
      if (uniform_below(rng, 6) == 0) h.push_back(v);
    for (Weight d : {1, 2, 3, 5, 8}) {
      auto result = mis(g, h, d);
      check_mis_contract(g, h, d, result);
      REQUIRE(mis(g, result, d) == result);
    }
  }
}

TEST_CASE("diameter") {
  CHECK(diameter(generate_grid(1, 1, 1)) == 0);
  CHECK(diameter(generate_grid(3, 3, 1)) == 4);
  CHECK(diameter(generate_grid(40, 40, 1)) == 78);
  CHECK(diameter(generate_grid(4, 7, 3)) == (3 + 6) * 3);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto g = generate_random_connected(20, 0.1, 9, seed);
    auto d = testing::floyd_warshall(g);
    Weight best = 0;
    for (const auto& row : d) best = std::max(best, *std::max_element(row.begin(), row.end()));
    CHECK(diameter(g) == best);
  }
}

TEST_CASE("doubling dimension estimate") {
  CHECK(estimate_doubling_dimension(generate_grid(1, 1, 1), 10, 1) == 0.0);
  for (NodeId n : {2, 5, 17, 40}) CHECK(estimate_doubling_dimension(path_graph(n), 50, 3) <= 2.0);
  const double grid = estimate_doubling_dimension(generate_grid(40, 40, 1), 64, 1);
  CHECK(grid > 0.0);
  CHECK(grid <= 3.0);
  CHECK(estimate_doubling_dimension(generate_grid(40, 40, 1), 64, 1) == grid);
}

TEST_CASE("greedy half cover covers the ball") {
  auto g = generate_grid(9, 9, 1);
  CHECK(greedy_half_cover_size(g, 40, 0) == 1);
  CHECK(greedy_half_cover_size(g, 40, 1) >= 1);
  CHECK(greedy_half_cover_size(g, 40, 4) <= 8);
}
