#pragma once

#include <cstdint>
#include <map>
#include <string_view>
#include <vector>

#include "ost/graph.hpp"
#include "ost/metric.hpp"

namespace ost {

using PathId = std::int32_t;
inline constexpr PathId kNoPath = -1;

/// Leader sets I_0 ⊇ I_1 ⊇ ... ⊇ I_kappa = {sink}, with I_0 = V and each
/// I_i a greedy 2^i-independent set seeded with I_{i+1}.
struct LeaderHierarchy {
  NodeId sink = kNoNode;
  int kappa = 1;
  Weight diameter = 0;
  std::vector<NodeSet> levels;  // levels[i] = I_i, i = 0..kappa
  /// Highest i with v in I_i.
  std::vector<int> top_level;

  const NodeSet& leaders(int level) const { return levels.at(static_cast<std::size_t>(level)); }
};

enum class PathKind { regular, pruned, modified };

std::string_view to_string(PathKind kind);
PathKind parse_path_kind(std::string_view text);

/// A leveled leader-to-leader path. `nodes.front()` is the level-`level`
/// start, `nodes.back()` the end (a level-(level+1) leader, a
/// pseudo-leader, or for pruned paths the intersection point).
struct TreePath {
  PathId id = kNoPath;
  int level = 0;
  PathKind kind = PathKind::regular;
  std::vector<NodeId> nodes;
  Weight length = 0;
  /// Pruned and modified paths: the higher-level path the prune point lies on.
  PathId host = kNoPath;
  /// Modified paths: the pruned path they extend (kNoPath when the modified
  /// path starts at a node promoted by a level assignment on `host`).
  PathId origin = kNoPath;
  /// Index into `nodes` of the prune point (pruned: last node; modified:
  /// the junction between the pruned part and the host segment).
  std::size_t prune_index = 0;

  NodeId start() const { return nodes.front(); }
  NodeId end() const { return nodes.back(); }
};

/// A level a node was assigned, and the path the assignment came from.
/// path == kNoPath only for the sink's top-level role.
struct Role {
  int level = 0;
  PathId path = kNoPath;

  friend bool operator==(const Role&, const Role&) = default;
};

/// Output of the first construction phase: shortest paths between leaders of
/// consecutive levels, pruned where they hit higher-level paths and merged
/// where they hit same-level paths. Tree edges are fixed here.
struct TreeDraft {
  WeightedGraph graph;
  LeaderHierarchy hierarchy;
  std::vector<TreePath> paths;
  /// Spanning-tree parent (toward the sink); kNoNode for the sink.
  std::vector<NodeId> tree_parent;
  /// Path that first included each node (kNoPath for the sink).
  std::vector<PathId> owner;
  /// Path computed for each non-sink node at its hierarchy level.
  std::vector<PathId> own_path;
};

/// The modified tree: every non-sink node has exactly one outgoing path at
/// its effective level, ending at a node of strictly higher effective level.
struct ObliviousTree {
  WeightedGraph graph;
  LeaderHierarchy hierarchy;
  std::vector<TreePath> paths;
  std::vector<NodeId> tree_parent;
  std::vector<PathId> owner;
  std::vector<std::vector<Role>> roles;
  std::vector<int> effective_level;
  /// Outgoing path of each node at its effective level; kNoPath for the sink.
  std::vector<PathId> outgoing;
  /// pseudo_leaders[i]: nodes that ended some modified level-(i-1) path.
  std::vector<NodeSet> pseudo_leaders;

  NodeId sink() const { return hierarchy.sink; }
  int kappa() const { return hierarchy.kappa; }
  const TreePath& path(PathId id) const { return paths.at(static_cast<std::size_t>(id)); }
  /// Ī_i: nodes with effective level >= i.
  NodeSet leaders(int level) const;
  /// Leader of v at `level`: follow outgoing-path ends until the effective
  /// level reaches `level`.
  NodeId leader_at(NodeId v, int level) const;
};

struct ClusterPartition {
  int level = 0;
  std::map<NodeId, NodeSet> clusters;  // leader -> Z_level^leader
};

struct LevelAssignment {
  NodeId node;
  int level;

  friend bool operator==(const LevelAssignment&, const LevelAssignment&) = default;
};

}  // namespace ost
