#pragma once

#include <string>
#include <string_view>

#include "ost/tree.hpp"

namespace ost {

/// Line-based text form of a modified tree. The graph itself is not stored;
/// its hash and node count are, and reading checks them.
std::string format_tree(const ObliviousTree& tree);

/// Inverse of format_tree. Throws ParseError on malformed text and
/// ValidationError(mismatch) when the text was written for another graph.
ObliviousTree parse_tree(std::string_view text, const WeightedGraph& graph);

}  // namespace ost
