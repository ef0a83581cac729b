#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "ost/fusion.hpp"

namespace ost {

enum class OracleKind { exact_tree_enumeration, analytic_linear, analytic_constant, steiner_lower, concave_lower };

std::string_view to_string(OracleKind kind);

struct OracleResult {
  double value = 0;
  OracleKind kind = OracleKind::exact_tree_enumeration;
  /// Spanning-tree edges achieving `value` (exact enumeration only).
  std::vector<Edge> witness;
};

inline constexpr NodeId kDefaultEnumerationLimit = 10;
inline constexpr std::uint64_t kSpanningTreeGuard = 1'000'000;

/// Calls `visit` with the sorted edge list of every spanning tree of g, in
/// lexicographic order. Throws InstanceTooLarge once more than `guard`
/// trees have been produced.
void for_each_spanning_tree(const WeightedGraph& g, const std::function<void(std::span<const Edge>)>& visit,
                            std::uint64_t guard = kSpanningTreeGuard);

/// Minimum tree_cost over all spanning trees rooted at s; ties go to the
/// lexicographically smallest edge set. Throws InstanceTooLarge when
/// node_count > max_n or the tree count exceeds the guard.
OracleResult optimal_tree_cost_bruteforce(const WeightedGraph& g, std::span<const NodeId> sources,
                                          const FusionFunction& f, NodeId sink,
                                          NodeId max_n = kDefaultEnumerationLimit);

/// Sum of dist(a, s).
OracleResult analytic_optimal_linear(const WeightedGraph& g, std::span<const NodeId> sources, NodeId sink);

/// c times the minimum Steiner tree over A ∪ {s}. Uses exhaustive search up
/// to `max_nodes` nodes, otherwise the terminal-subset dynamic program when
/// A ∪ {s} has at most `max_terminals` members; InstanceTooLarge beyond both.
OracleResult analytic_optimal_constant(const WeightedGraph& g, std::span<const NodeId> sources, NodeId sink,
                                       double c, NodeId max_nodes = kDefaultSteinerLimit,
                                       std::size_t max_terminals = 0);

/// Exact Steiner weight by dynamic programming over terminal subsets
/// (Dreyfus-Wagner). Throws InstanceTooLarge above `max_terminals`.
Weight steiner_weight_dp(const WeightedGraph& g, std::span<const NodeId> terminals, std::size_t max_terminals = 14);

/// max(f(1) max_a dist(a,s), f(|A|) min_a dist(a,s)).
OracleResult steiner_lower_bound(const WeightedGraph& g, std::span<const NodeId> sources, NodeId sink,
                                 const FusionFunction& f);

/// Lower bound valid for every canonical f: the maximum of
/// steiner_lower_bound, f(1) * MST(metric closure of A ∪ {s}) / 2, and
/// f(|A|)/|A| * sum_a dist(a,s). When `steiner_weight` is given it replaces
/// the closure term by f(1) * steiner_weight.
OracleResult concave_lower_bound(const WeightedGraph& g, std::span<const NodeId> sources, NodeId sink,
                                 const FusionFunction& f, Weight steiner_weight = -1);

}  // namespace ost
