#include "ost/metric.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "ost/error.hpp"
#include "ost/random.hpp"

namespace ost {

NodeSet make_node_set(std::vector<NodeId> nodes) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

PathSeq shortest_path(const WeightedGraph& g, NodeId u, NodeId v) {
  if (!g.valid(u) || !g.valid(v)) throw std::out_of_range(fmt::format("shortest_path({}, {}): bad node", u, v));
  auto pred = g.predecessors_from(u);
  PathSeq path;
  path.length = g.distance(u, v);
  for (NodeId x = v; x != kNoNode; x = pred[static_cast<std::size_t>(x)]) path.nodes.push_back(x);
  std::reverse(path.nodes.begin(), path.nodes.end());
  return path;
}

Weight distance_to_set(const WeightedGraph& g, NodeId u, std::span<const NodeId> set) {
  auto row = g.distances_from(u);
  Weight best = kInfinity;
  for (NodeId x : set) best = std::min(best, row[static_cast<std::size_t>(x)]);
  return best;
}

NodeSet nearest_in_set(const WeightedGraph& g, NodeId u, std::span<const NodeId> set) {
  if (set.empty()) throw ValidationError(ValidationError::Kind::bad_argument, "nearest_in_set: empty set");
  auto row = g.distances_from(u);
  const Weight best = distance_to_set(g, u, set);
  NodeSet out;
  for (NodeId x : set)
    if (row[static_cast<std::size_t>(x)] == best) out.push_back(x);
  return make_node_set(std::move(out));
}

NodeSet neighborhood(const WeightedGraph& g, NodeId u, Weight r) {
  auto row = g.distances_from(u);
  NodeSet out;
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (row[static_cast<std::size_t>(v)] <= r) out.push_back(v);
  return out;
}

NodeSet mis(const WeightedGraph& g, std::span<const NodeId> seed, Weight d) {
  const auto n = static_cast<std::size_t>(g.node_count());
  std::vector<Weight> gap(n, kInfinity);  // distance to the current set
  std::vector<char> member(n, 0);
  auto absorb = [&](NodeId x) {
    member[static_cast<std::size_t>(x)] = 1;
    auto row = g.distances_from(x);
    for (std::size_t v = 0; v < n; ++v) gap[v] = std::min(gap[v], row[v]);
  };
  for (NodeId h : seed) absorb(h);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (!member[static_cast<std::size_t>(v)] && gap[static_cast<std::size_t>(v)] >= d) absorb(v);
  }
  NodeSet out;
  for (std::size_t v = 0; v < n; ++v)
    if (member[v]) out.push_back(static_cast<NodeId>(v));
  return out;
}

Weight diameter(const WeightedGraph& g) {
  Weight best = 0;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    auto row = g.distances_from(u);
    best = std::max(best, *std::max_element(row.begin(), row.end()));
  }
  return best;
}

std::size_t greedy_half_cover_size(const WeightedGraph& g, NodeId center, Weight radius) {
  const Weight half = (radius + 1) / 2;
  NodeSet points = neighborhood(g, center, radius);
  NodeSet candidates = neighborhood(g, center, radius + half);

  std::vector<char> covered(points.size(), 0);
  std::size_t remaining = points.size();
  std::size_t balls = 0;
  while (remaining > 0) {
    std::size_t best_gain = 0;
    NodeId best = kNoNode;
    for (NodeId c : candidates) {
      auto row = g.distances_from(c);
      std::size_t gain = 0;
      for (std::size_t k = 0; k < points.size(); ++k)
        if (!covered[k] && row[static_cast<std::size_t>(points[k])] <= half) ++gain;
      if (gain > best_gain) {
        best_gain = gain;
        best = c;
      }
    }
    auto row = g.distances_from(best);
    for (std::size_t k = 0; k < points.size(); ++k) {
      if (!covered[k] && row[static_cast<std::size_t>(points[k])] <= half) {
        covered[k] = 1;
        --remaining;
      }
    }
    ++balls;
  }
  return balls;
}

double estimate_doubling_dimension(const WeightedGraph& g, int samples, std::uint64_t seed) {
  if (samples < 1) throw ValidationError(ValidationError::Kind::bad_argument, "samples must be >= 1");
  const Weight diam = diameter(g);
  int max_exp = 0;
  while ((Weight{1} << max_exp) < diam) ++max_exp;

  Rng rng(seed);
  std::size_t worst = 1;
  for (int k = 0; k < samples; ++k) {
    auto center = static_cast<NodeId>(uniform_below(rng, static_cast<std::uint64_t>(g.node_count())));
    Weight radius = Weight{1} << uniform_below(rng, static_cast<std::uint64_t>(max_exp) + 1);
    worst = std::max(worst, greedy_half_cover_size(g, center, radius));
  }
  return std::log2(static_cast<double>(worst));
}

}  // namespace ost
