#include "ost/construct.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

#include <fmt/format.h>

#include "ost/error.hpp"

namespace ost {
namespace {

Weight path_length(const WeightedGraph& g, std::span<const NodeId> nodes) {
  Weight total = 0;
  for (std::size_t k = 1; k < nodes.size(); ++k) total += g.edge_weight(nodes[k - 1], nodes[k]);
  return total;
}

/// Prefix sums of edge weights along `nodes`.
std::vector<Weight> path_offsets(const WeightedGraph& g, std::span<const NodeId> nodes) {
  std::vector<Weight> off(nodes.size(), 0);
  for (std::size_t k = 1; k < nodes.size(); ++k) off[k] = off[k - 1] + g.edge_weight(nodes[k - 1], nodes[k]);
  return off;
}

std::size_t index_on(const TreePath& p, NodeId x) {
  auto it = std::find(p.nodes.begin(), p.nodes.end(), x);
  if (it == p.nodes.end())
    throw std::logic_error(fmt::format("node {} is not on path {}", x, p.id));
  return static_cast<std::size_t>(it - p.nodes.begin());
}

}  // namespace

std::string_view to_string(PathKind kind) {
  switch (kind) {
    case PathKind::regular: return "regular";
    case PathKind::pruned: return "pruned";
    case PathKind::modified: return "modified";
  }
  return "?";
}

PathKind parse_path_kind(std::string_view text) {
  if (text == "regular") return PathKind::regular;
  if (text == "pruned") return PathKind::pruned;
  if (text == "modified") return PathKind::modified;
  throw ParseError(0, fmt::format("unknown path kind '{}'", text));
}

NodeSet ObliviousTree::leaders(int level) const {
  NodeSet out;
  for (NodeId v = 0; v < static_cast<NodeId>(effective_level.size()); ++v)
    if (effective_level[static_cast<std::size_t>(v)] >= level) out.push_back(v);
  return out;
}

NodeId ObliviousTree::leader_at(NodeId v, int level) const {
  NodeId x = v;
  while (effective_level[static_cast<std::size_t>(x)] < level) {
    PathId out = outgoing[static_cast<std::size_t>(x)];
    if (out == kNoPath) throw std::logic_error(fmt::format("node {} has no outgoing path", x));
    x = path(out).end();
  }
  return x;
}

LeaderHierarchy build_hierarchy(const WeightedGraph& g, NodeId sink) {
  if (!g.valid(sink)) throw ValidationError(ValidationError::Kind::node_out_of_range, fmt::format("sink {} out of range", sink));
  if (!g.connected()) throw ValidationError(ValidationError::Kind::disconnected, "graph is not connected");

  LeaderHierarchy h;
  h.sink = sink;
  h.diameter = diameter(g);
  h.kappa = 1;
  while ((Weight{1} << h.kappa) < h.diameter) ++h.kappa;

  h.levels.resize(static_cast<std::size_t>(h.kappa) + 1);
  h.levels.back() = {sink};
  for (int i = h.kappa - 1; i >= 0; --i)
    h.levels[static_cast<std::size_t>(i)] = mis(g, h.levels[static_cast<std::size_t>(i) + 1], Weight{1} << i);

  h.top_level.assign(static_cast<std::size_t>(g.node_count()), 0);
  for (int i = 1; i <= h.kappa; ++i)
    for (NodeId v : h.levels[static_cast<std::size_t>(i)]) h.top_level[static_cast<std::size_t>(v)] = i;
  return h;
}

NodeId choose_leader(const WeightedGraph& g, NodeId v, std::span<const NodeId> candidates, NodeId sink) {
  NodeSet nearest = nearest_in_set(g, v, candidates);
  if (std::binary_search(nearest.begin(), nearest.end(), sink)) return sink;
  return nearest.front();
}

TreeDraft build_spanning_tree(const WeightedGraph& g, NodeId sink) {
  TreeDraft draft{g, build_hierarchy(g, sink), {}, {}, {}, {}};
  const auto n = static_cast<std::size_t>(g.node_count());
  const LeaderHierarchy& h = draft.hierarchy;
  draft.tree_parent.assign(n, kNoNode);
  draft.owner.assign(n, kNoPath);
  draft.own_path.assign(n, kNoPath);

  // Level of the path owning each node; the sink counts as owned at kappa.
  std::vector<int> owned_level(n, -1);
  owned_level[static_cast<std::size_t>(sink)] = h.kappa;

  for (int i = h.kappa - 1; i >= 0; --i) {
    const NodeSet& upper = h.leaders(i + 1);
    for (NodeId v : h.leaders(i)) {
      if (h.top_level[static_cast<std::size_t>(v)] != i) continue;

      const NodeId target = choose_leader(g, v, upper, sink);
      const PathSeq sp = shortest_path(g, v, target);
      std::size_t t = 0;
      while (owned_level[static_cast<std::size_t>(sp.nodes[t])] < 0) ++t;
      const NodeId hit = sp.nodes[t];
      const int hit_level = owned_level[static_cast<std::size_t>(hit)];

      TreePath p;
      p.id = static_cast<PathId>(draft.paths.size());
      p.level = i;
      p.nodes.assign(sp.nodes.begin(), sp.nodes.begin() + static_cast<std::ptrdiff_t>(t) + 1);
      if (hit == target) {
        p.kind = PathKind::regular;
      } else if (hit_level > i) {
        p.kind = PathKind::pruned;
        p.host = draft.owner[static_cast<std::size_t>(hit)];
        p.prune_index = t;
      } else {
        // Same-level intersection: follow the other path from here on.
        assert(hit_level == i);
        const TreePath& other = draft.paths[static_cast<std::size_t>(draft.owner[static_cast<std::size_t>(hit)])];
        const std::size_t at = index_on(other, hit);
        p.nodes.insert(p.nodes.end(), other.nodes.begin() + static_cast<std::ptrdiff_t>(at) + 1, other.nodes.end());
        p.kind = other.kind;
        p.host = other.host;
        if (other.kind == PathKind::pruned) p.prune_index = p.nodes.size() - 1;
      }
      p.length = path_length(g, p.nodes);

      for (std::size_t k = 0; k < t; ++k) {
        const auto x = static_cast<std::size_t>(sp.nodes[k]);
        owned_level[x] = i;
        draft.owner[x] = p.id;
        draft.tree_parent[x] = sp.nodes[k + 1];
      }
      draft.own_path[static_cast<std::size_t>(v)] = p.id;
      draft.paths.push_back(std::move(p));
    }
  }
  return draft;
}

std::vector<LevelAssignment> assign_levels(const WeightedGraph& g, std::span<const NodeId> nodes, int level) {
  std::vector<LevelAssignment> out;
  if (nodes.size() < 3 || level < 1) return out;

  const std::vector<Weight> off = path_offsets(g, nodes);
  std::vector<int> assigned(nodes.size(), -1);
  std::vector<std::size_t> chosen{0, nodes.size() - 1};
  for (int lambda = level - 1; lambda >= 0; --lambda) {
    const Weight d = Weight{1} << lambda;
    for (std::size_t k = 1; k + 1 < nodes.size(); ++k) {
      if (assigned[k] >= 0) continue;
      bool independent = true;
      for (std::size_t c : chosen) {
        if (std::abs(off[k] - off[c]) < d) {
          independent = false;
          break;
        }
      }
      if (independent) {
        assigned[k] = lambda;
        chosen.push_back(k);
      }
    }
  }
  for (std::size_t k = 1; k + 1 < nodes.size(); ++k) out.push_back({nodes[k], assigned[k]});
  return out;
}

TreePath modify_path(const WeightedGraph& g, const TreePath& pruned, const TreePath& host,
                     std::span<const int> effective_level) {
  const int omega = pruned.level;
  const NodeId y = pruned.end();
  const std::size_t at = index_on(host, y);
  const std::vector<Weight> off = path_offsets(g, host.nodes);

  std::size_t best = host.nodes.size();
  Weight best_gap = kInfinity;
  for (std::size_t m = 0; m < host.nodes.size(); ++m) {
    if (effective_level[static_cast<std::size_t>(host.nodes[m])] < omega + 1) continue;
    const Weight gap = std::abs(off[m] - off[at]);
    if (gap <= best_gap) {  // later index wins ties: toward the host's end
      best_gap = gap;
      best = m;
    }
  }
  if (best == host.nodes.size())
    throw std::logic_error(fmt::format("path {} has no level-{} node to serve as pseudo-leader", host.id, omega + 1));

  TreePath out;
  out.level = omega;
  out.kind = PathKind::modified;
  out.host = host.id;
  out.origin = pruned.id;
  out.nodes = pruned.nodes;
  out.prune_index = pruned.nodes.size() - 1;
  if (best > at) {
    for (std::size_t m = at + 1; m <= best; ++m) out.nodes.push_back(host.nodes[m]);
  } else {
    for (std::size_t m = at; m-- > best;) out.nodes.push_back(host.nodes[m]);
  }
  out.length = pruned.length + best_gap;
  return out;
}

ObliviousTree build_modified_tree(TreeDraft draft) {
  ObliviousTree t;
  t.graph = draft.graph;
  t.hierarchy = std::move(draft.hierarchy);
  t.paths = std::move(draft.paths);
  t.tree_parent = std::move(draft.tree_parent);
  t.owner = std::move(draft.owner);

  const WeightedGraph& g = t.graph;
  const auto n = static_cast<std::size_t>(g.node_count());
  const int kappa = t.hierarchy.kappa;
  const NodeId sink = t.hierarchy.sink;

  t.roles.assign(n, {});
  t.effective_level.assign(n, 0);
  t.outgoing.assign(n, kNoPath);
  t.pseudo_leaders.assign(static_cast<std::size_t>(kappa) + 1, {});

  auto add_role = [&](NodeId v, int level, PathId path) {
    auto& roles = t.roles[static_cast<std::size_t>(v)];
    if (std::find(roles.begin(), roles.end(), Role{level, path}) == roles.end()) roles.push_back({level, path});
    auto& e = t.effective_level[static_cast<std::size_t>(v)];
    e = std::max(e, level);
  };

  add_role(sink, kappa, kNoPath);
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (v != sink) add_role(v, t.hierarchy.top_level[static_cast<std::size_t>(v)], draft.own_path[static_cast<std::size_t>(v)]);

  // Draft path id -> the path that replaced it in the modified tree.
  std::vector<PathId> final_of(t.paths.size());
  for (std::size_t k = 0; k < final_of.size(); ++k) final_of[k] = static_cast<PathId>(k);

  auto push_path = [&](TreePath p) {
    p.id = static_cast<PathId>(t.paths.size());
    t.paths.push_back(std::move(p));
    return t.paths.back().id;
  };

  for (int i = kappa - 1; i >= 0; --i) {
    // Effective levels >= i are final here: later assignments are below i.
    std::vector<NodeId> at_level;
    for (NodeId v = 0; v < g.node_count(); ++v)
      if (v != sink && t.effective_level[static_cast<std::size_t>(v)] == i) at_level.push_back(v);

    std::vector<PathId> created;
    for (NodeId v : at_level) {
      PathId out = kNoPath;
      const int home = t.hierarchy.top_level[static_cast<std::size_t>(v)];
      if (home == i) {
        const PathId own = draft.own_path[static_cast<std::size_t>(v)];
        const TreePath& p = t.paths[static_cast<std::size_t>(own)];
        if (p.kind == PathKind::regular) {
          out = own;
        } else {
          const TreePath& host = t.paths[static_cast<std::size_t>(final_of[static_cast<std::size_t>(p.host)])];
          out = push_path(modify_path(g, p, host, t.effective_level));
          final_of[static_cast<std::size_t>(own)] = out;
        }
      } else {
        // Promoted above its hierarchy level by a level assignment on some
        // path it lies inside; leave along that path.
        assert(home < i);
        TreePath best;
        bool found = false;
        for (const Role& r : t.roles[static_cast<std::size_t>(v)]) {
          if (r.level != i || r.path == kNoPath) continue;
          const TreePath& host = t.paths[static_cast<std::size_t>(r.path)];
          if (host.start() == v || host.end() == v) continue;
          TreePath stub;
          stub.level = i;
          stub.kind = PathKind::pruned;
          stub.nodes = {v};
          TreePath candidate = modify_path(g, stub, host, t.effective_level);
          if (!found || candidate.length < best.length ||
              (candidate.length == best.length && candidate.host < best.host)) {
            best = std::move(candidate);
            found = true;
          }
        }
        if (!found) throw std::logic_error(fmt::format("promoted node {} has no interior role at level {}", v, i));
        out = push_path(std::move(best));
        add_role(v, i, out);
      }
      t.outgoing[static_cast<std::size_t>(v)] = out;
      const TreePath& chosen = t.paths[static_cast<std::size_t>(out)];
      if (chosen.kind == PathKind::modified) {
        t.pseudo_leaders[static_cast<std::size_t>(i) + 1].push_back(chosen.end());
        add_role(chosen.end(), i + 1, out);
      }
      created.push_back(out);
    }

    for (PathId id : created) {
      const TreePath& p = t.paths[static_cast<std::size_t>(id)];
      for (const auto& a : assign_levels(g, p.nodes, i)) add_role(a.node, a.level, id);
    }
  }

  for (auto& set : t.pseudo_leaders) set = make_node_set(std::move(set));
  for (NodeId v = 0; v < g.node_count(); ++v) {
    auto& roles = t.roles[static_cast<std::size_t>(v)];
    std::sort(roles.begin(), roles.end(), [](const Role& a, const Role& b) {
      return a.level != b.level ? a.level > b.level : a.path < b.path;
    });
  }
  return t;
}

ObliviousTree build_oblivious_tree(const WeightedGraph& g, NodeId sink) {
  return build_modified_tree(build_spanning_tree(g, sink));
}

ClusterPartition clusters(const ObliviousTree& tree, int level) {
  if (level < 0 || level > tree.kappa())
    throw ValidationError(ValidationError::Kind::bad_argument, fmt::format("level {} outside 0..{}", level, tree.kappa()));
  ClusterPartition out;
  out.level = level;
  for (NodeId v = 0; v < tree.graph.node_count(); ++v) out.clusters[tree.leader_at(v, level)].push_back(v);
  return out;
}

}  // namespace ost
