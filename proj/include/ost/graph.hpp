#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ost {

using NodeId = std::int32_t;
using Weight = std::int64_t;

inline constexpr NodeId kNoNode = -1;
inline constexpr Weight kInfinity = std::numeric_limits<Weight>::max() / 4;

struct Edge {
  NodeId u;
  NodeId v;
  Weight w;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
  NodeId to;
  Weight w;
};

/// A node sequence together with its total weight.
struct PathSeq {
  std::vector<NodeId> nodes;
  Weight length = 0;
};

namespace detail {
struct GraphData;
class MetricCache;
}  // namespace detail

/// Undirected simple graph with positive integer weights. Immutable once
/// created; copies share storage and the lazily filled distance tables, so
/// passing it by value is cheap and concurrent reads are safe.
class WeightedGraph {
 public:
  /// Validates and builds. Edges may be given with either endpoint first;
  /// they are stored normalized (u < v) and sorted.
  /// Throws ValidationError for self-loops, duplicates, zero weights,
  /// out-of-range ids, and (when require_connected) disconnected input.
  static WeightedGraph create(NodeId node_count, std::vector<Edge> edges,
                              bool require_connected = true);

  /// The single-node graph.
  WeightedGraph();

  NodeId node_count() const noexcept;
  std::size_t edge_count() const noexcept;
  std::span<const Edge> edges() const noexcept;
  /// Neighbors of u sorted by ascending id.
  std::span<const Neighbor> neighbors(NodeId u) const;
  /// Weight of edge (u,v), or kInfinity when absent.
  Weight edge_weight(NodeId u, NodeId v) const;
  bool has_edge(NodeId u, NodeId v) const { return edge_weight(u, v) != kInfinity; }
  bool valid(NodeId u) const noexcept { return u >= 0 && u < node_count(); }
  bool connected() const noexcept;

  /// Weighted shortest-path distance. Fills the table for `from` on first use.
  Weight distance(NodeId from, NodeId to) const;
  /// Full distance row from `from`.
  std::span<const Weight> distances_from(NodeId from) const;
  /// Deterministic predecessor row from `from`: pred[v] is the smallest-id
  /// neighbor of v lying on some shortest from->v path; pred[from] == kNoNode.
  std::span<const NodeId> predecessors_from(NodeId from) const;

  /// Stable 64-bit FNV-1a digest of the node count and edge list.
  std::uint64_t hash() const noexcept;

 private:
  explicit WeightedGraph(std::shared_ptr<const detail::GraphData> data);
  std::shared_ptr<const detail::GraphData> data_;
};

/// Parses the graph text format: optional '#' comment lines, a header
/// "n m", then m lines "u v w".
WeightedGraph load_graph(std::string_view text);
WeightedGraph load_graph_file(const std::string& path);
/// Inverse of load_graph; edges in stored order.
std::string format_graph(const WeightedGraph& g);

}  // namespace ost
