#include "ost/serialize.hpp"

#include <sstream>

#include <fmt/format.h>

#include "ost/error.hpp"

namespace ost {
namespace {

constexpr std::string_view kMagic = "ost-tree 1";

void append_list(std::string& out, const std::vector<NodeId>& nodes) {
  out += fmt::format(" {}", nodes.size());
  for (NodeId v : nodes) out += fmt::format(" {}", v);
}

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  /// Next non-empty, non-comment line as a token stream; false at the end.
  bool next(std::istringstream& line) {
    while (pos_ < text_.size()) {
      const auto nl = text_.find('\n', pos_);
      const auto end = nl == std::string_view::npos ? text_.size() : nl;
      std::string_view raw = text_.substr(pos_, end - pos_);
      pos_ = end + 1;
      ++number_;
      if (raw.empty() || raw.front() == '#' || raw.find_first_not_of(" \t\r") == std::string_view::npos) continue;
      line.clear();
      line.str(std::string(raw));
      return true;
    }
    return false;
  }

  std::istringstream expect(std::string_view keyword) {
    std::istringstream line;
    if (!next(line)) fail(fmt::format("expected '{}', found end of input", keyword));
    std::string word;
    line >> word;
    if (word != keyword) fail(fmt::format("expected '{}', found '{}'", keyword, word));
    return line;
  }

  template <typename T>
  T read(std::istringstream& line, std::string_view what) {
    T value{};
    if (!(line >> value)) fail(fmt::format("missing or malformed {}", what));
    return value;
  }

  std::vector<NodeId> read_list(std::istringstream& line, std::string_view what) {
    const auto count = read<std::size_t>(line, what);
    std::vector<NodeId> out(count);
    for (auto& v : out) v = read<NodeId>(line, what);
    return out;
  }

  void finish(std::istringstream& line) {
    std::string extra;
    if (line >> extra) fail(fmt::format("unexpected trailing token '{}'", extra));
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(number_, what); }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t number_ = 0;
};

}  // namespace

std::string format_tree(const ObliviousTree& tree) {
  const auto& h = tree.hierarchy;
  std::string out;
  out += fmt::format("{}\n", kMagic);
  out += fmt::format("graph_hash {:016x}\n", tree.graph.hash());
  out += fmt::format("nodes {}\n", tree.graph.node_count());
  out += fmt::format("sink {}\nkappa {}\ndiameter {}\n", h.sink, h.kappa, h.diameter);
  for (int i = 0; i <= h.kappa; ++i) {
    out += fmt::format("leaders {}", i);
    append_list(out, h.leaders(i));
    out += '\n';
  }
  for (std::size_t i = 0; i < tree.pseudo_leaders.size(); ++i) {
    out += fmt::format("pseudo {}", i);
    append_list(out, tree.pseudo_leaders[i]);
    out += '\n';
  }
  out += fmt::format("paths {}\n", tree.paths.size());
  for (const auto& p : tree.paths) {
    out += fmt::format("path {} {} {} {} {} {} {}", p.id, p.level, to_string(p.kind), p.host, p.origin, p.prune_index,
                       p.length);
    append_list(out, p.nodes);
    out += '\n';
  }
  for (NodeId v = 0; v < tree.graph.node_count(); ++v) {
    const auto k = static_cast<std::size_t>(v);
    out += fmt::format("node {} {} {} {} {} {}", v, tree.tree_parent[k], tree.owner[k], tree.effective_level[k],
                       tree.outgoing[k], tree.roles[k].size());
    for (const auto& r : tree.roles[k]) out += fmt::format(" {}:{}", r.level, r.path);
    out += '\n';
  }
  out += "end\n";
  return out;
}

ObliviousTree parse_tree(std::string_view text, const WeightedGraph& graph) {
  using Kind = ValidationError::Kind;
  LineReader in(text);
  {
    std::istringstream line;
    if (!in.next(line) || line.str() != kMagic) in.fail("missing 'ost-tree 1' header");
  }
  ObliviousTree t;
  t.graph = graph;
  {
    auto line = in.expect("graph_hash");
    const auto hash = in.read<std::string>(line, "graph hash");
    in.finish(line);
    if (hash != fmt::format("{:016x}", graph.hash()))
      throw ValidationError(Kind::mismatch, "tree file was built for a different graph (hash mismatch)");
  }
  {
    auto line = in.expect("nodes");
    const auto n = in.read<NodeId>(line, "node count");
    in.finish(line);
    if (n != graph.node_count()) throw ValidationError(Kind::mismatch, "tree file node count does not match the graph");
  }
  auto& h = t.hierarchy;
  {
    auto line = in.expect("sink");
    h.sink = in.read<NodeId>(line, "sink");
    in.finish(line);
    line = in.expect("kappa");
    h.kappa = in.read<int>(line, "kappa");
    in.finish(line);
    line = in.expect("diameter");
    h.diameter = in.read<Weight>(line, "diameter");
    in.finish(line);
  }
  const auto n = static_cast<std::size_t>(graph.node_count());
  auto check_node = [&](NodeId v, bool allow_none) {
    if ((allow_none && v == kNoNode) || graph.valid(v)) return v;
    in.fail(fmt::format("node id {} out of range", v));
  };
  if (!graph.valid(h.sink)) in.fail("sink out of range");
  if (h.kappa < 1 || h.kappa > 62) in.fail("kappa out of range");

  h.levels.resize(static_cast<std::size_t>(h.kappa) + 1);
  h.top_level.assign(n, 0);
  for (int i = 0; i <= h.kappa; ++i) {
    auto line = in.expect("leaders");
    if (in.read<int>(line, "level") != i) in.fail("leader levels out of order");
    h.levels[static_cast<std::size_t>(i)] = in.read_list(line, "leader list");
    in.finish(line);
    for (NodeId v : h.levels[static_cast<std::size_t>(i)]) h.top_level[static_cast<std::size_t>(check_node(v, false))] = i;
  }
  t.pseudo_leaders.resize(static_cast<std::size_t>(h.kappa) + 1);
  for (int i = 0; i <= h.kappa; ++i) {
    auto line = in.expect("pseudo");
    if (in.read<int>(line, "level") != i) in.fail("pseudo-leader levels out of order");
    t.pseudo_leaders[static_cast<std::size_t>(i)] = in.read_list(line, "pseudo-leader list");
    in.finish(line);
    for (NodeId v : t.pseudo_leaders[static_cast<std::size_t>(i)]) check_node(v, false);
  }
  {
    auto line = in.expect("paths");
    const auto count = in.read<std::size_t>(line, "path count");
    in.finish(line);
    t.paths.resize(count);
  }
  for (std::size_t k = 0; k < t.paths.size(); ++k) {
    auto line = in.expect("path");
    auto& p = t.paths[k];
    p.id = in.read<PathId>(line, "path id");
    if (p.id != static_cast<PathId>(k)) in.fail("path ids must be consecutive from 0");
    p.level = in.read<int>(line, "path level");
    try {
      p.kind = parse_path_kind(in.read<std::string>(line, "path kind"));
    } catch (const ParseError& e) {
      in.fail(e.what());
    }
    p.host = in.read<PathId>(line, "host");
    p.origin = in.read<PathId>(line, "origin");
    p.prune_index = in.read<std::size_t>(line, "prune index");
    p.length = in.read<Weight>(line, "length");
    p.nodes = in.read_list(line, "path nodes");
    in.finish(line);
    if (p.nodes.empty()) in.fail("empty path");
    for (NodeId v : p.nodes) check_node(v, false);
  }
  auto check_path = [&](PathId id) {
    if (id == kNoPath || (id >= 0 && static_cast<std::size_t>(id) < t.paths.size())) return id;
    in.fail(fmt::format("path id {} out of range", id));
  };
  for (auto& p : t.paths) {
    check_path(p.host);
    check_path(p.origin);
  }
  t.tree_parent.assign(n, kNoNode);
  t.owner.assign(n, kNoPath);
  t.effective_level.assign(n, 0);
  t.outgoing.assign(n, kNoPath);
  t.roles.assign(n, {});
  for (std::size_t v = 0; v < n; ++v) {
    auto line = in.expect("node");
    if (in.read<std::size_t>(line, "node id") != v) in.fail("node records must be in id order");
    t.tree_parent[v] = check_node(in.read<NodeId>(line, "parent"), true);
    t.owner[v] = check_path(in.read<PathId>(line, "owner"));
    t.effective_level[v] = in.read<int>(line, "effective level");
    t.outgoing[v] = check_path(in.read<PathId>(line, "outgoing path"));
    const auto count = in.read<std::size_t>(line, "role count");
    for (std::size_t r = 0; r < count; ++r) {
      const auto token = in.read<std::string>(line, "role");
      Role role;
      char colon = 0;
      std::istringstream parts(token);
      if (!(parts >> role.level >> colon >> role.path) || colon != ':' || !parts.eof())
        in.fail(fmt::format("malformed role '{}'", token));
      check_path(role.path);
      t.roles[v].push_back(role);
    }
    in.finish(line);
  }
  in.expect("end");
  return t;
}

}  // namespace ost
