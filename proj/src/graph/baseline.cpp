#include "ost/baseline.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "ost/error.hpp"
#include "ost/metric.hpp"

namespace ost {
namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

bool edge_order(const Edge& a, const Edge& b) {
  if (a.w != b.w) return a.w < b.w;
  if (a.u != b.u) return a.u < b.u;
  return a.v < b.v;
}

}  // namespace

RootedTree root_tree(NodeId node_count, std::span<const Edge> edges, NodeId root) {
  const auto n = static_cast<std::size_t>(node_count);
  std::vector<std::vector<NodeId>> adj(n);
  for (const auto& e : edges) {
    adj[static_cast<std::size_t>(e.u)].push_back(e.v);
    adj[static_cast<std::size_t>(e.v)].push_back(e.u);
  }
  RootedTree tree{root, std::vector<NodeId>(n, kNoNode)};
  std::vector<char> seen(n, 0);
  std::vector<NodeId> stack{root};
  seen[static_cast<std::size_t>(root)] = 1;
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    for (NodeId v : adj[static_cast<std::size_t>(u)]) {
      if (seen[static_cast<std::size_t>(v)]) continue;
      seen[static_cast<std::size_t>(v)] = 1;
      tree.parent[static_cast<std::size_t>(v)] = u;
      stack.push_back(v);
    }
  }
  return tree;
}

std::vector<Edge> tree_edges(const WeightedGraph& g, const RootedTree& tree) {
  std::vector<Edge> out;
  for (NodeId v = 0; v < static_cast<NodeId>(tree.parent.size()); ++v) {
    NodeId p = tree.parent[static_cast<std::size_t>(v)];
    if (p == kNoNode) continue;
    out.push_back({std::min(v, p), std::max(v, p), g.edge_weight(v, p)});
  }
  std::sort(out.begin(), out.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  return out;
}

bool is_spanning_tree(const WeightedGraph& g, const RootedTree& tree) {
  const auto n = static_cast<std::size_t>(g.node_count());
  if (tree.parent.size() != n || !g.valid(tree.root) || tree.parent[static_cast<std::size_t>(tree.root)] != kNoNode)
    return false;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    NodeId p = tree.parent[static_cast<std::size_t>(v)];
    if (v == tree.root) continue;
    if (p == kNoNode || !g.valid(p) || !g.has_edge(v, p)) return false;
  }
  // 0 = unvisited, 1 = on current walk, 2 = known to reach the root
  std::vector<char> state(n, 0);
  state[static_cast<std::size_t>(tree.root)] = 2;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    std::vector<NodeId> walk;
    NodeId x = v;
    while (state[static_cast<std::size_t>(x)] == 0) {
      state[static_cast<std::size_t>(x)] = 1;
      walk.push_back(x);
      x = tree.parent[static_cast<std::size_t>(x)];
    }
    if (state[static_cast<std::size_t>(x)] == 1) return false;
    for (NodeId w : walk) state[static_cast<std::size_t>(w)] = 2;
  }
  return true;
}

RootedTree mst(const WeightedGraph& g, NodeId sink) {
  std::vector<Edge> sorted(g.edges().begin(), g.edges().end());
  std::sort(sorted.begin(), sorted.end(), edge_order);
  DisjointSets sets(static_cast<std::size_t>(g.node_count()));
  std::vector<Edge> chosen;
  for (const auto& e : sorted)
    if (sets.unite(static_cast<std::size_t>(e.u), static_cast<std::size_t>(e.v))) chosen.push_back(e);
  return root_tree(g.node_count(), chosen, sink);
}

RootedTree spt(const WeightedGraph& g, NodeId source) {
  auto pred = g.predecessors_from(source);
  return RootedTree{source, std::vector<NodeId>(pred.begin(), pred.end())};
}

SteinerResult steiner_brute_force(const WeightedGraph& g, std::span<const NodeId> terminals, NodeId max_nodes) {
  if (g.node_count() > max_nodes)
    throw InstanceTooLarge(fmt::format("steiner_brute_force: {} nodes exceeds the limit of {}", g.node_count(), max_nodes));
  NodeSet required = make_node_set(std::vector<NodeId>(terminals.begin(), terminals.end()));
  if (required.size() <= 1) return {};

  const auto n = static_cast<std::size_t>(g.node_count());
  std::vector<char> is_terminal(n, 0);
  for (NodeId t : required) is_terminal[static_cast<std::size_t>(t)] = 1;
  std::vector<NodeId> optional;
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (!is_terminal[static_cast<std::size_t>(v)]) optional.push_back(v);

  std::vector<Edge> sorted(g.edges().begin(), g.edges().end());
  std::sort(sorted.begin(), sorted.end(), edge_order);

  SteinerResult best{kInfinity, {}};
  std::vector<char> active(n);
  const std::uint64_t subsets = std::uint64_t{1} << optional.size();
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    std::copy(is_terminal.begin(), is_terminal.end(), active.begin());
    std::size_t active_count = required.size();
    for (std::size_t k = 0; k < optional.size(); ++k) {
      if (mask >> k & 1u) {
        active[static_cast<std::size_t>(optional[k])] = 1;
        ++active_count;
      }
    }
    DisjointSets sets(n);
    Weight total = 0;
    std::vector<Edge> chosen;
    for (const auto& e : sorted) {
      if (!active[static_cast<std::size_t>(e.u)] || !active[static_cast<std::size_t>(e.v)]) continue;
      if (sets.unite(static_cast<std::size_t>(e.u), static_cast<std::size_t>(e.v))) {
        total += e.w;
        chosen.push_back(e);
      }
    }
    if (chosen.size() + 1 != active_count) continue;  // induced subgraph disconnected
    if (total < best.weight) best = {total, std::move(chosen)};
  }
  return best;
}

}  // namespace ost
