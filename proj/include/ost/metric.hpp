#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ost/graph.hpp"

namespace ost {

/// Sorted, duplicate-free node list.
using NodeSet = std::vector<NodeId>;

NodeSet make_node_set(std::vector<NodeId> nodes);

/// Minimum-weight u->v path. Among equal-weight paths the one obtained by
/// walking smallest-id predecessors back from v is returned.
PathSeq shortest_path(const WeightedGraph& g, NodeId u, NodeId v);

/// dist(u, S): smallest distance from u to any member of S. S nonempty.
Weight distance_to_set(const WeightedGraph& g, NodeId u, std::span<const NodeId> set);

/// All members of S at minimum distance from u. Throws ValidationError on empty S.
NodeSet nearest_in_set(const WeightedGraph& g, NodeId u, std::span<const NodeId> set);

/// {v : dist(u, v) <= r}, sorted.
NodeSet neighborhood(const WeightedGraph& g, NodeId u, Weight r);

/// Greedy maximal independent set for distance d seeded with `seed`:
/// returns I with seed ⊆ I where every node of I \ seed is at distance >= d
/// from every other member of I. Candidates are scanned in ascending id.
NodeSet mis(const WeightedGraph& g, std::span<const NodeId> seed, Weight d);

/// Maximum pairwise distance (0 for a single node).
Weight diameter(const WeightedGraph& g);

/// Upper-bound estimate of the doubling dimension: over `samples` random
/// (center, radius) pairs, N(u, R) is covered greedily by balls of radius
/// ceil(R/2); the result is log2 of the largest cover needed.
double estimate_doubling_dimension(const WeightedGraph& g, int samples, std::uint64_t seed);

/// Size of the greedy half-radius cover of N(center, radius). Exposed for tests.
std::size_t greedy_half_cover_size(const WeightedGraph& g, NodeId center, Weight radius);

}  // namespace ost
