#pragma once

#include <cstdint>

#include "ost/graph.hpp"

namespace ost {

/// 4-connected rows x cols grid; node id = r * cols + c; every edge has `weight`.
WeightedGraph generate_grid(std::int64_t rows, std::int64_t cols, Weight weight = 1);

/// Random spanning tree (random recursive tree over a shuffled labelling)
/// plus each remaining pair independently with probability extra_edge_prob.
/// Weights are uniform in [1, max_weight]. Fully determined by `seed`.
WeightedGraph generate_random_connected(NodeId n, double extra_edge_prob, Weight max_weight, std::uint64_t seed);

}  // namespace ost
