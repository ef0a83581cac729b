#pragma once

#include <span>
#include <utility>

#include "ost/tree.hpp"

namespace ost {

/// kappa = ceil(log2 D) (at least 1); I_kappa = {s}; I_i = mis(g, I_{i+1}, 2^i).
LeaderHierarchy build_hierarchy(const WeightedGraph& g, NodeId sink);

/// Leader choice for v among `candidates`: nearest, the sink on ties, then
/// the smallest id.
NodeId choose_leader(const WeightedGraph& g, NodeId v, std::span<const NodeId> candidates, NodeId sink);

/// First construction phase (spanning tree with pruned and merged paths).
TreeDraft build_spanning_tree(const WeightedGraph& g, NodeId sink);

/// Level assignment along a path measured in path distance.
///
/// For lambda = level-1 down to 0 a greedy 2^lambda-independent set is
/// taken over the path nodes, scanning from the start, seeded with both
/// endpoints and every node selected at a higher lambda. Each interior
/// node receives the single lambda it was selected at; paths with two
/// nodes or level 0 produce no assignments.
std::vector<LevelAssignment> assign_levels(const WeightedGraph& g, std::span<const NodeId> nodes, int level);

/// Extends `pruned` (level omega, ending at its prune point y on `host`) to
/// the nearest node of `host` with effective level >= omega+1, measured in
/// distance along the host; ties go toward the host's end. The pruned
/// path's own endpoint role never counts, so y qualifies only through
/// levels it holds on other paths. The returned path has kind modified,
/// keeps the level, and records host/origin; its id is left unset.
TreePath modify_path(const WeightedGraph& g, const TreePath& pruned, const TreePath& host,
                     std::span<const int> effective_level);

/// Second construction phase: assigns levels top-down, turns pruned paths
/// into modified paths ending at pseudo-leaders, and gives every node
/// promoted above its hierarchy level an outgoing path along the path
/// that promoted it.
ObliviousTree build_modified_tree(TreeDraft draft);

/// Both phases.
ObliviousTree build_oblivious_tree(const WeightedGraph& g, NodeId sink);

/// Z_level: leader -> nodes whose leader_at(level) is that leader.
ClusterPartition clusters(const ObliviousTree& tree, int level);

}  // namespace ost
