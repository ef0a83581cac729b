#include "ost/validate.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "ost/baseline.hpp"

namespace ost {
namespace {

class CheckBuilder {
 public:
  explicit CheckBuilder(std::string name) { check_.name = std::move(name); }

  template <typename... Args>
  void fail(fmt::format_string<Args...> format, Args&&... args) {
    if (check_.violations++ == 0) check_.detail = fmt::format(format, std::forward<Args>(args)...);
    check_.passed = false;
  }

  void skip(std::string why) {
    check_.passed = false;
    check_.detail = std::move(why);
  }

  ValidationCheck done() { return std::move(check_); }

 private:
  ValidationCheck check_;
};

bool is_tree_edge(const ObliviousTree& t, NodeId a, NodeId b) {
  const auto n = static_cast<NodeId>(t.tree_parent.size());
  if (a < 0 || b < 0 || a >= n || b >= n) return false;
  return t.tree_parent[static_cast<std::size_t>(a)] == b || t.tree_parent[static_cast<std::size_t>(b)] == a;
}

/// Depths along tree_parent, or nullopt when the parent map has a cycle or
/// a dangling entry.
std::optional<std::vector<int>> tree_depths(const ObliviousTree& t) {
  const auto n = t.tree_parent.size();
  std::vector<int> depth(n, -1);
  if (!t.graph.valid(t.sink())) return std::nullopt;
  depth[static_cast<std::size_t>(t.sink())] = 0;
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<NodeId> walk;
    auto x = static_cast<NodeId>(v);
    while (depth[static_cast<std::size_t>(x)] < 0) {
      walk.push_back(x);
      if (walk.size() > n) return std::nullopt;
      x = t.tree_parent[static_cast<std::size_t>(x)];
      if (x == kNoNode || x < 0 || static_cast<std::size_t>(x) >= n) return std::nullopt;
    }
    int d = depth[static_cast<std::size_t>(x)];
    for (auto it = walk.rbegin(); it != walk.rend(); ++it) depth[static_cast<std::size_t>(*it)] = ++d;
  }
  return depth;
}

/// Leader chain that tolerates corrupted input: nullopt on a broken chain.
std::optional<NodeId> safe_leader(const ObliviousTree& t, NodeId v, int level) {
  NodeId x = v;
  for (int steps = 0; steps <= t.kappa() + 1; ++steps) {
    if (t.effective_level[static_cast<std::size_t>(x)] >= level) return x;
    PathId out = t.outgoing[static_cast<std::size_t>(x)];
    if (out < 0 || static_cast<std::size_t>(out) >= t.paths.size()) return std::nullopt;
    x = t.paths[static_cast<std::size_t>(out)].end();
  }
  return std::nullopt;
}

ValidationCheck check_hierarchy(const ObliviousTree& t) {
  CheckBuilder c("hierarchy");
  const auto& h = t.hierarchy;
  const WeightedGraph& g = t.graph;
  if (h.levels.size() != static_cast<std::size_t>(h.kappa) + 1) {
    c.fail("expected {} levels, found {}", h.kappa + 1, h.levels.size());
    return c.done();
  }
  if (h.levels.back() != NodeSet{h.sink}) c.fail("top level is not exactly the sink");
  if (h.levels.front().size() != static_cast<std::size_t>(g.node_count())) c.fail("level 0 is not every node");
  for (int i = 0; i < h.kappa; ++i) {
    const NodeSet& lower = h.leaders(i);
    const NodeSet& upper = h.leaders(i + 1);
    if (!std::includes(lower.begin(), lower.end(), upper.begin(), upper.end()))
      c.fail("I_{} is not contained in I_{}", i + 1, i);
    if (!std::binary_search(lower.begin(), lower.end(), h.sink)) c.fail("sink missing from I_{}", i);
    const Weight gap = Weight{1} << i;
    for (std::size_t a = 0; a < lower.size(); ++a) {
      const bool a_up = std::binary_search(upper.begin(), upper.end(), lower[a]);
      auto row = g.distances_from(lower[a]);
      for (std::size_t b = a + 1; b < lower.size(); ++b) {
        if (a_up && std::binary_search(upper.begin(), upper.end(), lower[b])) continue;
        if (row[static_cast<std::size_t>(lower[b])] < gap)
          c.fail("I_{} members {} and {} are closer than {}", i, lower[a], lower[b], gap);
      }
      if (!a_up) {
        const Weight reach = (i + 1 < h.kappa) ? (Weight{1} << (i + 1)) - 1 : h.diameter;
        const Weight d = distance_to_set(g, lower[a], upper);
        if (d > reach) c.fail("node {} of I_{} is {} from I_{} (bound {})", lower[a], i, d, i + 1, reach);
      }
    }
  }
  return c.done();
}

}  // namespace

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

const ValidationCheck& ValidationReport::check(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw std::out_of_range("no validation check named " + name);
}

std::string ValidationReport::to_text() const {
  std::string out;
  for (const auto& c : checks) {
    out += fmt::format("{:<16} {}", c.name, c.passed ? "pass" : "FAIL");
    if (!c.passed) out += fmt::format("  violations={}  first: {}", c.violations, c.detail);
    out += '\n';
  }
  return out;
}

Weight path_length_bound(PathKind kind, int level, int kappa, Weight diameter) {
  const Weight unit = Weight{1} << level;
  switch (kind) {
    case PathKind::regular: return level + 1 == kappa ? diameter : 2 * unit - 1;
    case PathKind::pruned: return unit - 1;
    case PathKind::modified: return 3 * unit - 2;
  }
  return 0;
}

ValidationReport validate_tree(const ObliviousTree& t) {
  ValidationReport report;
  const WeightedGraph& g = t.graph;
  const auto n = static_cast<std::size_t>(g.node_count());
  const int kappa = t.kappa();

  report.checks.push_back(check_hierarchy(t));

  {
    CheckBuilder c("spanning");
    std::size_t edges = 0;
    if (t.tree_parent.size() != n) {
      c.fail("parent map has {} entries for {} nodes", t.tree_parent.size(), n);
    } else {
      for (NodeId v = 0; v < g.node_count(); ++v) {
        NodeId p = t.tree_parent[static_cast<std::size_t>(v)];
        if (v == t.sink()) {
          if (p != kNoNode) c.fail("sink has parent {}", p);
          continue;
        }
        if (p == kNoNode || !g.valid(p)) {
          c.fail("node {} has no parent", v);
          continue;
        }
        ++edges;
        if (!g.has_edge(v, p)) c.fail("tree edge ({}, {}) is not a graph edge", v, p);
      }
      if (edges + 1 != n) c.fail("{} tree edges for {} nodes", edges, n);
    }
    report.checks.push_back(c.done());
  }

  const auto depth = t.tree_parent.size() == n ? tree_depths(t) : std::nullopt;
  {
    CheckBuilder c("acyclic");
    if (!depth) c.fail("parent pointers do not all lead to the sink");
    report.checks.push_back(c.done());
  }

  {
    CheckBuilder structure("path_structure");
    CheckBuilder regular("regular_bound");
    CheckBuilder pruned("pruned_bound");
    CheckBuilder modified("modified_bound");
    for (const auto& p : t.paths) {
      std::set<NodeId> seen(p.nodes.begin(), p.nodes.end());
      if (p.nodes.empty() || seen.size() != p.nodes.size()) structure.fail("path {} is empty or repeats a node", p.id);
      Weight length = 0;
      for (std::size_t k = 1; k < p.nodes.size(); ++k) {
        if (!is_tree_edge(t, p.nodes[k - 1], p.nodes[k])) {
          structure.fail("path {} uses non-tree edge ({}, {})", p.id, p.nodes[k - 1], p.nodes[k]);
          break;
        }
        length += g.edge_weight(p.nodes[k - 1], p.nodes[k]);
      }
      if (length != p.length) structure.fail("path {} records length {} but measures {}", p.id, p.length, length);

      const Weight bound = path_length_bound(p.kind, p.level, kappa, t.hierarchy.diameter);
      if (p.length <= bound) continue;
      CheckBuilder& c = p.kind == PathKind::regular ? regular : p.kind == PathKind::pruned ? pruned : modified;
      c.fail("path {} (level {}) has length {} > {}", p.id, p.level, p.length, bound);
    }
    report.checks.push_back(structure.done());
    report.checks.push_back(regular.done());
    report.checks.push_back(pruned.done());
    report.checks.push_back(modified.done());
  }

  {
    CheckBuilder c("outgoing");
    if (t.outgoing.size() != n || t.effective_level.size() != n) {
      c.fail("per-node tables have the wrong size");
    } else {
      for (NodeId v = 0; v < g.node_count(); ++v) {
        const PathId out = t.outgoing[static_cast<std::size_t>(v)];
        const int e = t.effective_level[static_cast<std::size_t>(v)];
        if (v == t.sink()) {
          if (out != kNoPath || e != kappa) c.fail("sink must have level {} and no outgoing path", kappa);
          continue;
        }
        if (e >= kappa) c.fail("non-sink node {} has level {}", v, e);
        if (e < t.hierarchy.top_level[static_cast<std::size_t>(v)]) c.fail("node {} lost its hierarchy level", v);
        if (out < 0 || static_cast<std::size_t>(out) >= t.paths.size()) {
          c.fail("node {} has no outgoing path", v);
          continue;
        }
        const TreePath& p = t.paths[static_cast<std::size_t>(out)];
        if (p.start() != v || p.level != e || p.kind == PathKind::pruned)
          c.fail("node {}: outgoing path {} does not start it at level {}", v, out, e);
        else if (t.effective_level[static_cast<std::size_t>(p.end())] < e + 1)
          c.fail("node {}: path {} ends at {} below level {}", v, out, p.end(), e + 1);
      }
    }
    report.checks.push_back(c.done());
  }

  // Cluster checks need consistent per-node tables.
  const bool tables_ok = t.outgoing.size() == n && t.effective_level.size() == n;
  std::vector<std::vector<NodeId>> leader(static_cast<std::size_t>(kappa) + 1, std::vector<NodeId>(n, kNoNode));
  {
    CheckBuilder partition("partition");
    if (!tables_ok) {
      partition.skip("per-node tables have the wrong size");
    } else {
      for (int i = 0; i <= kappa; ++i) {
        for (NodeId v = 0; v < g.node_count(); ++v) {
          auto l = safe_leader(t, v, i);
          if (!l) {
            partition.fail("node {} has no leader chain to level {}", v, i);
            continue;
          }
          leader[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)] = *l;
          if (leader[static_cast<std::size_t>(i)][static_cast<std::size_t>(*l)] != kNoNode &&
              leader[static_cast<std::size_t>(i)][static_cast<std::size_t>(*l)] != *l)
            partition.fail("leader {} at level {} belongs to another cluster", *l, i);
        }
      }
      for (NodeId v = 0; v < g.node_count(); ++v) {
        if (leader[0][static_cast<std::size_t>(v)] != v) partition.fail("level-0 cluster of {} is not a singleton", v);
        if (leader[static_cast<std::size_t>(kappa)][static_cast<std::size_t>(v)] != t.sink())
          partition.fail("node {} is outside the top-level cluster", v);
      }
    }
    report.checks.push_back(partition.done());
  }

  {
    CheckBuilder c("laminar");
    if (!tables_ok) {
      c.skip("per-node tables have the wrong size");
    } else {
      for (int i = 0; i < kappa; ++i) {
        for (std::size_t v = 0; v < n; ++v) {
          NodeId lo = leader[static_cast<std::size_t>(i)][v];
          NodeId hi = leader[static_cast<std::size_t>(i) + 1][v];
          if (lo == kNoNode || hi == kNoNode) continue;
          if (leader[static_cast<std::size_t>(i) + 1][static_cast<std::size_t>(lo)] != hi)
            c.fail("cluster of {} at level {} is split at level {}", v, i, i + 1);
        }
      }
    }
    report.checks.push_back(c.done());
  }

  {
    CheckBuilder radius("cluster_radius");
    CheckBuilder internal("internal_paths");
    if (!tables_ok) {
      radius.skip("per-node tables have the wrong size");
      internal.skip("per-node tables have the wrong size");
    } else {
      if (!depth) internal.skip("tree is not acyclic");
      for (int i = 0; i <= kappa; ++i) {
        const Weight bound = 3 * (Weight{1} << i);
        const auto& lead = leader[static_cast<std::size_t>(i)];
        for (NodeId v = 0; v < g.node_count(); ++v) {
          const NodeId u = lead[static_cast<std::size_t>(v)];
          if (u == kNoNode) continue;
          const Weight d = g.distance(v, u);
          if (d > bound) radius.fail("node {} is {} from its level-{} leader {} (bound {})", v, d, i, u, bound);
          if (!depth) continue;
          // Walk the tree path v..u from both ends toward their meeting point.
          NodeId a = v, b = u;
          auto inside = [&](NodeId x) { return lead[static_cast<std::size_t>(x)] == u; };
          bool ok = true;
          while (a != b) {
            if (!inside(a) || !inside(b)) {
              ok = false;
              break;
            }
            if ((*depth)[static_cast<std::size_t>(a)] >= (*depth)[static_cast<std::size_t>(b)])
              a = t.tree_parent[static_cast<std::size_t>(a)];
            else
              b = t.tree_parent[static_cast<std::size_t>(b)];
          }
          if (ok && !inside(a)) ok = false;
          if (!ok) internal.fail("tree path from {} to its level-{} leader {} leaves the cluster", v, i, u);
        }
      }
    }
    report.checks.push_back(radius.done());
    report.checks.push_back(internal.done());
  }
  return report;
}

}  // namespace ost
