#include "ost/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

#include <fmt/format.h>

#include "ost/error.hpp"

namespace ost {
namespace {

NodeSet checked_terminals(const WeightedGraph& g, std::span<const NodeId> nodes) {
  for (NodeId a : nodes)
    if (!g.valid(a))
      throw ValidationError(ValidationError::Kind::node_out_of_range, fmt::format("node {} out of range", a));
  return make_node_set({nodes.begin(), nodes.end()});
}

void check_sink(const WeightedGraph& g, NodeId sink) {
  if (!g.valid(sink))
    throw ValidationError(ValidationError::Kind::node_out_of_range, fmt::format("sink {} out of range", sink));
}

class Enumerator {
 public:
  Enumerator(const WeightedGraph& g, const std::function<void(std::span<const Edge>)>& visit, std::uint64_t guard)
      : n_(g.node_count()), edges_(g.edges().begin(), g.edges().end()), visit_(visit), guard_(guard) {}

  void run() {
    std::vector<NodeId> comp(static_cast<std::size_t>(n_));
    std::iota(comp.begin(), comp.end(), 0);
    chosen_.clear();
    recurse(0, comp, n_);
  }

 private:
  // comp: component label per node; components: number of labels left.
  void recurse(std::size_t k, const std::vector<NodeId>& comp, NodeId components) {
    if (components == 1) {
      if (++count_ > guard_)
        throw InstanceTooLarge(fmt::format("more than {} spanning trees", guard_));
      visit_(chosen_);
      return;
    }
    if (k == edges_.size()) return;
    const Edge& e = edges_[k];
    const NodeId cu = comp[static_cast<std::size_t>(e.u)];
    const NodeId cv = comp[static_cast<std::size_t>(e.v)];
    if (cu != cv) {
      std::vector<NodeId> merged(comp);
      for (auto& c : merged)
        if (c == cv) c = cu;
      chosen_.push_back(e);
      recurse(k + 1, merged, components - 1);
      chosen_.pop_back();
    }
    if (completable(k + 1, comp, components)) recurse(k + 1, comp, components);
  }

  // Whether edges[k..] can still join all current components.
  bool completable(std::size_t k, const std::vector<NodeId>& comp, NodeId components) const {
    std::vector<NodeId> label(comp);
    NodeId left = components;
    for (std::size_t q = k; q < edges_.size() && left > 1; ++q) {
      const NodeId a = label[static_cast<std::size_t>(edges_[q].u)];
      const NodeId b = label[static_cast<std::size_t>(edges_[q].v)];
      if (a == b) continue;
      for (auto& c : label)
        if (c == b) c = a;
      --left;
    }
    return left == 1;
  }

  NodeId n_;
  std::vector<Edge> edges_;
  const std::function<void(std::span<const Edge>)>& visit_;
  std::uint64_t guard_;
  std::uint64_t count_ = 0;
  std::vector<Edge> chosen_;
};

Weight closure_mst_weight(const WeightedGraph& g, const NodeSet& terminals) {
  const std::size_t k = terminals.size();
  if (k <= 1) return 0;
  std::vector<Weight> best(k, kInfinity);
  std::vector<char> in(k, 0);
  best[0] = 0;
  Weight total = 0;
  for (std::size_t round = 0; round < k; ++round) {
    std::size_t pick = k;
    for (std::size_t q = 0; q < k; ++q)
      if (!in[q] && (pick == k || best[q] < best[pick])) pick = q;
    in[pick] = 1;
    total += best[pick];
    auto row = g.distances_from(terminals[pick]);
    for (std::size_t q = 0; q < k; ++q)
      if (!in[q]) best[q] = std::min(best[q], row[static_cast<std::size_t>(terminals[q])]);
  }
  return total;
}

}  // namespace

std::string_view to_string(OracleKind kind) {
  switch (kind) {
    case OracleKind::exact_tree_enumeration: return "exact-tree-enumeration";
    case OracleKind::analytic_linear: return "analytic-linear";
    case OracleKind::analytic_constant: return "analytic-constant";
    case OracleKind::steiner_lower: return "steiner-lower";
    case OracleKind::concave_lower: return "concave-lower";
  }
  return "?";
}

void for_each_spanning_tree(const WeightedGraph& g, const std::function<void(std::span<const Edge>)>& visit,
                            std::uint64_t guard) {
  Enumerator(g, visit, guard).run();
}

OracleResult optimal_tree_cost_bruteforce(const WeightedGraph& g, std::span<const NodeId> sources,
                                          const FusionFunction& f, NodeId sink, NodeId max_n) {
  check_sink(g, sink);
  const NodeSet a = checked_terminals(g, sources);
  if (g.node_count() > max_n)
    throw InstanceTooLarge(fmt::format("{} nodes exceeds the enumeration limit {}", g.node_count(), max_n));
  OracleResult best{0, OracleKind::exact_tree_enumeration, {}};
  bool found = false;
  for_each_spanning_tree(g, [&](std::span<const Edge> edges) {
    const double cost = tree_cost(g, root_tree(g.node_count(), edges, sink), a, f);
    if (!found || cost < best.value) {
      best.value = cost;
      best.witness.assign(edges.begin(), edges.end());
      found = true;
    }
  });
  return best;
}

OracleResult analytic_optimal_linear(const WeightedGraph& g, std::span<const NodeId> sources, NodeId sink) {
  check_sink(g, sink);
  const NodeSet a = checked_terminals(g, sources);
  auto row = g.distances_from(sink);
  Weight total = 0;
  for (NodeId v : a) total += row[static_cast<std::size_t>(v)];
  return {static_cast<double>(total), OracleKind::analytic_linear, {}};
}

Weight steiner_weight_dp(const WeightedGraph& g, std::span<const NodeId> terminal_span, std::size_t max_terminals) {
  const NodeSet terminals = checked_terminals(g, terminal_span);
  if (terminals.size() > max_terminals)
    throw InstanceTooLarge(fmt::format("{} terminals exceeds the limit {}", terminals.size(), max_terminals));
  if (terminals.size() <= 1) return 0;
  if (terminals.size() == 2) return g.distance(terminals[0], terminals[1]);

  const auto n = static_cast<std::size_t>(g.node_count());
  const std::size_t k = terminals.size() - 1;  // the last terminal is the root
  const std::size_t full = (std::size_t{1} << k) - 1;
  std::vector<std::vector<Weight>> dp(full + 1);
  for (std::size_t t = 0; t < k; ++t) {
    auto row = g.distances_from(terminals[t]);
    dp[std::size_t{1} << t].assign(row.begin(), row.end());
  }

  using Item = std::pair<Weight, NodeId>;
  for (std::size_t mask = 1; mask <= full; ++mask) {
    if ((mask & (mask - 1)) == 0) continue;
    std::vector<Weight> cur(n, kInfinity);
    const std::size_t low = mask & (~mask + 1);
    // Splits with the lowest bit in `sub` enumerate each unordered pair once.
    for (std::size_t sub = (mask - 1) & mask; sub > 0; sub = (sub - 1) & mask) {
      if (!(sub & low)) continue;
      const auto& x = dp[sub];
      const auto& y = dp[mask ^ sub];
      for (std::size_t v = 0; v < n; ++v) cur[v] = std::min(cur[v], x[v] + y[v]);
    }
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (std::size_t v = 0; v < n; ++v)
      if (cur[v] < kInfinity) heap.emplace(cur[v], static_cast<NodeId>(v));
    while (!heap.empty()) {
      auto [d, u] = heap.top();
      heap.pop();
      if (d != cur[static_cast<std::size_t>(u)]) continue;
      for (const auto& nb : g.neighbors(u)) {
        if (d + nb.w < cur[static_cast<std::size_t>(nb.to)]) {
          cur[static_cast<std::size_t>(nb.to)] = d + nb.w;
          heap.emplace(d + nb.w, nb.to);
        }
      }
    }
    dp[mask] = std::move(cur);
  }
  return dp[full][static_cast<std::size_t>(terminals.back())];
}

OracleResult analytic_optimal_constant(const WeightedGraph& g, std::span<const NodeId> sources, NodeId sink,
                                       double c, NodeId max_nodes, std::size_t max_terminals) {
  check_sink(g, sink);
  NodeSet terminals = checked_terminals(g, sources);
  if (terminals.empty()) return {0, OracleKind::analytic_constant, {}};
  terminals = make_node_set([&] {
    auto t = terminals;
    t.push_back(sink);
    return t;
  }());
  Weight weight = 0;
  if (g.node_count() <= max_nodes) {
    weight = steiner_brute_force(g, terminals, max_nodes).weight;
  } else if (terminals.size() <= max_terminals) {
    weight = steiner_weight_dp(g, terminals, max_terminals);
  } else {
    throw InstanceTooLarge(fmt::format("{} nodes exceeds the Steiner limit {}", g.node_count(), max_nodes));
  }
  return {c * static_cast<double>(weight), OracleKind::analytic_constant, {}};
}

OracleResult steiner_lower_bound(const WeightedGraph& g, std::span<const NodeId> sources, NodeId sink,
                                 const FusionFunction& f) {
  check_sink(g, sink);
  const NodeSet a = checked_terminals(g, sources);
  if (a.empty()) return {0, OracleKind::steiner_lower, {}};
  auto row = g.distances_from(sink);
  Weight far = 0;
  Weight near = kInfinity;
  for (NodeId v : a) {
    far = std::max(far, row[static_cast<std::size_t>(v)]);
    near = std::min(near, row[static_cast<std::size_t>(v)]);
  }
  const double value = std::max(f(1) * static_cast<double>(far),
                                f(static_cast<std::int64_t>(a.size())) * static_cast<double>(near));
  return {value, OracleKind::steiner_lower, {}};
}

OracleResult concave_lower_bound(const WeightedGraph& g, std::span<const NodeId> sources, NodeId sink,
                                 const FusionFunction& f, Weight steiner_weight) {
  OracleResult out = steiner_lower_bound(g, sources, sink, f);
  out.kind = OracleKind::concave_lower;
  const NodeSet a = checked_terminals(g, sources);
  if (a.empty()) return out;

  NodeSet terminals = a;
  terminals.push_back(sink);
  terminals = make_node_set(std::move(terminals));
  const double tree_term = steiner_weight >= 0 ? f(1) * static_cast<double>(steiner_weight)
                                               : f(1) * static_cast<double>(closure_mst_weight(g, terminals)) / 2.0;

  auto row = g.distances_from(sink);
  Weight sum = 0;
  for (NodeId v : a) sum += row[static_cast<std::size_t>(v)];
  const auto k = static_cast<std::int64_t>(a.size());
  const double flow_term = f(k) / static_cast<double>(k) * static_cast<double>(sum);

  out.value = std::max({out.value, tree_term, flow_term});
  return out;
}

}  // namespace ost
