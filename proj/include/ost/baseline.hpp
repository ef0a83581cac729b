#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ost/graph.hpp"

namespace ost {

/// Spanning tree given as a parent map; parent[root] == kNoNode.
struct RootedTree {
  NodeId root = kNoNode;
  std::vector<NodeId> parent;
};

/// Re-roots an undirected edge set (must be a spanning tree of n nodes) at `root`.
RootedTree root_tree(NodeId node_count, std::span<const Edge> tree_edges, NodeId root);

/// Edges of a rooted tree as (child, parent, weight) normalized to u < v, sorted.
std::vector<Edge> tree_edges(const WeightedGraph& g, const RootedTree& tree);

/// True when `tree` is a spanning tree of g (n-1 graph edges, no cycle, reaches root).
bool is_spanning_tree(const WeightedGraph& g, const RootedTree& tree);

/// Kruskal over edges ordered by (weight, u, v); rooted at `sink`.
RootedTree mst(const WeightedGraph& g, NodeId sink);

/// Shortest-path tree from `source` using the smallest-id predecessor rule.
RootedTree spt(const WeightedGraph& g, NodeId source);

struct SteinerResult {
  Weight weight = 0;
  std::vector<Edge> edges;
};

inline constexpr NodeId kDefaultSteinerLimit = 12;

/// Exact minimum Steiner tree by enumerating Steiner-node subsets and taking
/// the MST of each connected induced subgraph. Throws InstanceTooLarge when
/// node_count exceeds `max_nodes`.
SteinerResult steiner_brute_force(const WeightedGraph& g, std::span<const NodeId> terminals,
                                  NodeId max_nodes = kDefaultSteinerLimit);

}  // namespace ost
