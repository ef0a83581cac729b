#include <doctest.h>

#include <set>

#include "ost/baseline.hpp"
#include "ost/construct.hpp"
#include "ost/generators.hpp"
#include "ost/serialize.hpp"
#include "ost/validate.hpp"
#include "test_support.hpp"

using namespace ost;
using testing::path_graph;

namespace {

std::vector<WeightedGraph> sample_graphs() {
  std::vector<WeightedGraph> out;
  for (std::uint64_t seed = 0; seed < 40; ++seed)
    out.push_back(generate_random_connected(5 + static_cast<NodeId>(seed % 35), 0.12, 1 + static_cast<Weight>(seed % 4), seed));
  out.push_back(generate_grid(7, 9, 1));
  out.push_back(generate_grid(5, 5, 2));
  out.push_back(path_graph(17));
  return out;
}

TreePath make_path(const WeightedGraph& g, std::vector<NodeId> nodes, int level, PathId id) {
  TreePath p;
  p.id = id;
  p.level = level;
  p.nodes = std::move(nodes);
  for (std::size_t k = 1; k < p.nodes.size(); ++k) p.length += g.edge_weight(p.nodes[k - 1], p.nodes[k]);
  return p;
}

}  // namespace

TEST_CASE("build_hierarchy on a single node") {
  auto h = build_hierarchy(generate_grid(1, 1, 1), 0);
  CHECK(h.kappa == 1);
  CHECK(h.leaders(1) == NodeSet{0});
  CHECK(h.leaders(0) == NodeSet{0});
}

TEST_CASE("build_hierarchy on P5") {
  auto h = build_hierarchy(path_graph(5), 0);
  CHECK(h.kappa == 2);
  CHECK(h.leaders(2) == NodeSet{0});
  CHECK(h.leaders(1) == NodeSet{0, 2, 4});
  CHECK(h.leaders(0) == NodeSet{0, 1, 2, 3, 4});
}

TEST_CASE("hierarchy invariants") {
  auto graphs = sample_graphs();
  graphs.push_back(generate_grid(3, 3, 1));
  for (const auto& g : graphs) {
    for (NodeId s : {NodeId{0}, static_cast<NodeId>(g.node_count() / 2)}) {
      auto h = build_hierarchy(g, s);
      auto d = testing::floyd_warshall(g);
      Weight D = 0;
      for (const auto& row : d) D = std::max(D, *std::max_element(row.begin(), row.end()));
      REQUIRE((Weight{1} << h.kappa) >= D);
      if (D > 2) REQUIRE((Weight{1} << (h.kappa - 1)) < D);
      REQUIRE(h.leaders(h.kappa) == NodeSet{s});
      REQUIRE(h.leaders(0).size() == static_cast<std::size_t>(g.node_count()));
      for (int i = 0; i < h.kappa; ++i) {
        const auto& lo = h.leaders(i);
        const auto& hi = h.leaders(i + 1);
        REQUIRE(std::includes(lo.begin(), lo.end(), hi.begin(), hi.end()));
        for (NodeId u : lo)
          for (NodeId v : lo) {
            if (u == v) continue;
            const bool both_up = std::binary_search(hi.begin(), hi.end(), u) && std::binary_search(hi.begin(), hi.end(), v);
            if (!both_up) REQUIRE(d[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] >= (Weight{1} << i));
          }
        for (NodeId v : lo) {
          if (std::binary_search(hi.begin(), hi.end(), v)) continue;
          Weight near = kInfinity;
          for (NodeId u : hi) near = std::min(near, d[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)]);
          if (i + 1 < h.kappa) REQUIRE(near <= (Weight{2} << i) - 1);
          else REQUIRE(near <= D);
        }
      }
    }
  }
}

TEST_CASE("choose_leader prefers the sink, then the smallest id") {
  auto p5 = path_graph(5);
  CHECK(choose_leader(p5, 2, std::vector<NodeId>{0, 4}, 4) == 4);
  CHECK(choose_leader(p5, 2, std::vector<NodeId>{0, 4}, 1) == 0);
  CHECK(choose_leader(p5, 3, std::vector<NodeId>{0, 4}, 0) == 4);
}

TEST_CASE("build_spanning_tree on P5 merges the second level-1 path") {
  auto draft = build_spanning_tree(path_graph(5), 0);
  const auto& p2 = draft.paths[static_cast<std::size_t>(draft.own_path[2])];
  CHECK(p2.nodes == std::vector<NodeId>{2, 1, 0});
  CHECK(p2.kind == PathKind::regular);
  const auto& p4 = draft.paths[static_cast<std::size_t>(draft.own_path[4])];
  CHECK(p4.nodes == std::vector<NodeId>{4, 3, 2, 1, 0});
  CHECK(p4.kind == PathKind::regular);
  CHECK(draft.tree_parent == std::vector<NodeId>{kNoNode, 0, 1, 2, 3});
  for (const auto& p : draft.paths)
    if (p.kind == PathKind::pruned) CHECK(p.length == 0);
}

TEST_CASE("build_spanning_tree yields a spanning tree") {
  for (const auto& g : sample_graphs()) {
    auto draft = build_spanning_tree(g, 0);
    REQUIRE(is_spanning_tree(g, RootedTree{0, draft.tree_parent}));
    for (NodeId v = 1; v < g.node_count(); ++v) REQUIRE(draft.own_path[static_cast<std::size_t>(v)] != kNoPath);
  }
}

TEST_CASE("assign_levels examples") {
  auto p2 = path_graph(2);
  CHECK(assign_levels(p2, std::vector<NodeId>{0, 1}, 3).empty());

  auto p9 = path_graph(9);
  std::vector<NodeId> nodes{0, 1, 2, 3, 4, 5, 6, 7, 8};
  auto levels = assign_levels(p9, nodes, 3);
  std::vector<int> by_node(9, -1);
  for (const auto& a : levels) by_node[static_cast<std::size_t>(a.node)] = a.level;
  CHECK(by_node == std::vector<int>{-1, 0, 1, 0, 2, 0, 1, 0, -1});

  for (const auto& a : assign_levels(p9, nodes, 1)) CHECK(a.level == 0);
  CHECK(assign_levels(p9, nodes, 1).size() == 7);
  CHECK(assign_levels(p9, nodes, 0).empty());
}

TEST_CASE("assign_levels property: nested independent sets along the path") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto g = generate_random_connected(30, 0.0, 4, seed);
    auto p = shortest_path(g, 0, g.node_count() - 1);
    std::vector<Weight> off(p.nodes.size(), 0);
    for (std::size_t k = 1; k < p.nodes.size(); ++k) off[k] = off[k - 1] + g.edge_weight(p.nodes[k - 1], p.nodes[k]);
    const int level = 4;
    auto levels = assign_levels(g, p.nodes, level);
    if (p.nodes.size() < 3) continue;
    REQUIRE(levels.size() == p.nodes.size() - 2);
    for (int lambda = level - 1; lambda >= 0; --lambda) {
      // L_lambda: endpoints plus interior nodes at level >= lambda.
      std::vector<std::size_t> chosen{0, p.nodes.size() - 1};
      for (std::size_t k = 0; k < levels.size(); ++k)
        if (levels[k].level >= lambda) chosen.push_back(k + 1);
      for (std::size_t a : chosen)
        for (std::size_t b : chosen)
          if (a != b && !(a == 0 && b == p.nodes.size() - 1) && !(b == 0 && a == p.nodes.size() - 1))
            REQUIRE(std::abs(off[a] - off[b]) >= (Weight{1} << lambda));
      for (std::size_t k = 1; k + 1 < p.nodes.size(); ++k) {
        Weight near = kInfinity;
        for (std::size_t c : chosen) near = std::min(near, std::abs(off[k] - off[c]));
        REQUIRE(near < (Weight{1} << lambda));
      }
    }
  }
}

TEST_CASE("modify_path reaches the nearest qualifying host node") {
  // Host 0-1-2-3-4-5-6 with a spur 7 attached at 2.
  auto g = WeightedGraph::create(8, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}, {4, 5, 1}, {5, 6, 1}, {2, 7, 1}});
  auto host = make_path(g, {0, 1, 2, 3, 4, 5, 6}, 3, 0);
  auto pruned = make_path(g, {7, 2}, 1, 1);
  pruned.kind = PathKind::pruned;
  pruned.host = 0;

  SUBCASE("bound is tight at omega = 1") {
    std::vector<int> eff{1, 0, 0, 0, 1, 2, 4, 1};
    auto m = modify_path(g, pruned, host, eff);
    CHECK(m.kind == PathKind::modified);
    CHECK(m.nodes == std::vector<NodeId>{7, 2, 3, 4, 5});
    CHECK(m.length == 4);
    CHECK(m.length == 3 * 2 - 2);
    CHECK(m.host == 0);
    CHECK(m.origin == 1);
    CHECK(m.prune_index == 1);
  }
  SUBCASE("host end is the nearest qualifying node") {
    auto short_host = make_path(g, {0, 1, 2, 3}, 2, 0);
    std::vector<int> eff{3, 0, 1, 2, 0, 0, 0, 1};
    CHECK(modify_path(g, pruned, short_host, eff).end() == 3);
  }
  SUBCASE("backward toward the host start") {
    std::vector<int> eff{3, 2, 1, 0, 1, 1, 4, 1};
    auto m = modify_path(g, pruned, host, eff);
    CHECK(m.nodes == std::vector<NodeId>{7, 2, 1});
  }
  SUBCASE("ties go toward the host end") {
    std::vector<int> eff{3, 2, 0, 2, 0, 0, 4, 1};
    CHECK(modify_path(g, pruned, host, eff).end() == 3);
  }
  SUBCASE("prune point qualifies through another role") {
    std::vector<int> eff{3, 0, 2, 0, 0, 0, 4, 1};
    auto m = modify_path(g, pruned, host, eff);
    CHECK(m.nodes == std::vector<NodeId>{7, 2});
    CHECK(m.length == 1);
  }
  SUBCASE("no qualifying node is a construction error") {
    std::vector<int> eff{1, 0, 0, 0, 0, 0, 1, 1};
    CHECK_THROWS_AS(modify_path(g, pruned, host, eff), std::logic_error);
  }
}

TEST_CASE("build_modified_tree on P5") {
  auto t = build_oblivious_tree(path_graph(5), 0);
  CHECK(t.tree_parent == std::vector<NodeId>{kNoNode, 0, 1, 2, 3});
  CHECK(t.effective_level == std::vector<int>{2, 0, 1, 0, 1});
  CHECK(t.path(t.outgoing[4]).nodes == std::vector<NodeId>{4, 3, 2, 1, 0});
  CHECK(t.path(t.outgoing[2]).nodes == std::vector<NodeId>{2, 1, 0});
  CHECK(t.leader_at(4, 2) == 0);
  CHECK(t.leader_at(3, 1) == 2);
}

TEST_CASE("a pruned path is extended into a modified path") {
  auto g = WeightedGraph::create(7, {{0, 4, 1}, {0, 5, 1}, {1, 4, 1}, {2, 3, 1}, {2, 6, 1}, {3, 4, 1}});
  auto t = build_oblivious_tree(g, 0);
  const auto& out1 = t.path(t.outgoing[1]);
  CHECK(out1.kind == PathKind::modified);
  CHECK(out1.level == 1);
  CHECK(out1.nodes == std::vector<NodeId>{1, 4, 0});
  CHECK(out1.prune_index == 1);
  REQUIRE(out1.origin != kNoPath);
  CHECK(t.path(out1.origin).kind == PathKind::pruned);
  CHECK(t.path(out1.origin).end() == 4);
  CHECK(t.effective_level[static_cast<std::size_t>(out1.end())] >= 2);
  CHECK(std::binary_search(t.pseudo_leaders[2].begin(), t.pseudo_leaders[2].end(), out1.end()));
  CHECK(validate_tree(t).all_passed());
}

TEST_CASE("clusters on P5") {
  auto t = build_oblivious_tree(path_graph(5), 0);
  auto z2 = clusters(t, 2);
  CHECK(z2.clusters.size() == 1);
  CHECK(z2.clusters.at(0) == NodeSet{0, 1, 2, 3, 4});
  auto z0 = clusters(t, 0);
  CHECK(z0.clusters.size() == 5);
  for (const auto& [u, members] : z0.clusters) CHECK(members == NodeSet{u});
  auto z1 = clusters(t, 1);
  CHECK(z1.clusters.at(0) == NodeSet{0, 1});
  CHECK(z1.clusters.at(2) == NodeSet{2, 3});
  CHECK(z1.clusters.at(4) == NodeSet{4});
}

TEST_CASE("modified tree properties on sampled graphs") {
  for (const auto& g : sample_graphs()) {
    for (NodeId s : {NodeId{0}, static_cast<NodeId>(g.node_count() - 1)}) {
      auto t = build_oblivious_tree(g, s);
      auto report = validate_tree(t);
      for (const char* name : {"hierarchy", "spanning", "acyclic", "path_structure", "regular_bound", "outgoing",
                               "partition", "laminar", "cluster_radius"}) {
        INFO(name, " ", report.check(name).detail);
        REQUIRE(report.check(name).passed);
      }
      // Leaders of each level contain the hierarchy level; the sink alone tops it.
      for (int i = 0; i <= t.kappa(); ++i) {
        auto lead = t.leaders(i);
        const auto& base = t.hierarchy.leaders(i);
        REQUIRE(std::includes(lead.begin(), lead.end(), base.begin(), base.end()));
      }
      REQUIRE(t.leaders(t.kappa()) == NodeSet{s});
      for (const auto& p : t.paths) {
        if (p.kind != PathKind::modified) continue;
        REQUIRE(t.effective_level[static_cast<std::size_t>(p.end())] >= p.level + 1);
      }
      // Tree edges are exactly the draft edges.
      auto draft = build_spanning_tree(g, s);
      REQUIRE(draft.tree_parent == t.tree_parent);
      REQUIRE(format_tree(build_oblivious_tree(g, s)) == format_tree(t));
    }
  }
}
