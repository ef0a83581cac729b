#include "ost/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <mutex>
#include <queue>
#include <sstream>

#include <fmt/format.h>

#include "ost/error.hpp"

namespace ost {
namespace detail {

/// Per-source Dijkstra tables, filled on demand. Each source row is
/// written exactly once under its own once_flag and never mutated after.
class MetricCache {
 public:
  explicit MetricCache(const GraphData& g);

  struct Row {
    std::vector<Weight> dist;
    std::vector<NodeId> pred;
  };

  const Row& row(NodeId source) const;

 private:
  void fill(NodeId source) const;

  const GraphData& graph_;
  std::unique_ptr<std::once_flag[]> once_;
  mutable std::vector<std::unique_ptr<Row>> rows_;
};

struct GraphData {
  NodeId node_count = 0;
  std::vector<Edge> edges;
  std::vector<std::size_t> offsets;  // CSR into adjacency
  std::vector<Neighbor> adjacency;
  bool connected = true;
  std::uint64_t hash = 0;
  std::unique_ptr<MetricCache> cache;
};

MetricCache::MetricCache(const GraphData& g)
    : graph_(g), once_(new std::once_flag[static_cast<std::size_t>(g.node_count)]),
      rows_(static_cast<std::size_t>(g.node_count)) {}

const MetricCache::Row& MetricCache::row(NodeId source) const {
  std::call_once(once_[static_cast<std::size_t>(source)], [&] { fill(source); });
  return *rows_[static_cast<std::size_t>(source)];
}

void MetricCache::fill(NodeId source) const {
  const auto n = static_cast<std::size_t>(graph_.node_count);
  auto result = std::make_unique<Row>();
  result->dist.assign(n, kInfinity);
  result->pred.assign(n, kNoNode);

  using Item = std::pair<Weight, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  result->dist[static_cast<std::size_t>(source)] = 0;
  heap.emplace(0, source);
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d != result->dist[static_cast<std::size_t>(u)]) continue;
    for (std::size_t k = graph_.offsets[u]; k < graph_.offsets[u + 1]; ++k) {
      const auto& nb = graph_.adjacency[k];
      const Weight nd = d + nb.w;
      if (nd < result->dist[static_cast<std::size_t>(nb.to)]) {
        result->dist[static_cast<std::size_t>(nb.to)] = nd;
        heap.emplace(nd, nb.to);
      }
    }
  }
  // Predecessor = smallest-id tight neighbor. Adjacency is sorted, so the
  // first tight neighbor found wins.
  for (std::size_t v = 0; v < n; ++v) {
    if (static_cast<NodeId>(v) == source || result->dist[v] == kInfinity) continue;
    for (std::size_t k = graph_.offsets[v]; k < graph_.offsets[v + 1]; ++k) {
      const auto& nb = graph_.adjacency[k];
      const Weight du = result->dist[static_cast<std::size_t>(nb.to)];
      if (du != kInfinity && du + nb.w == result->dist[v]) {
        result->pred[v] = nb.to;
        break;
      }
    }
  }
  rows_[static_cast<std::size_t>(source)] = std::move(result);
}

}  // namespace detail

namespace {

std::uint64_t fnv1a(std::uint64_t h, std::uint64_t value) {
  for (int byte = 0; byte < 8; ++byte) {
    h ^= (value >> (8 * byte)) & 0xffu;
    h *= 0x100000001b3ULL;
  }
  return h;
}

bool is_connected(const detail::GraphData& g) {
  if (g.node_count <= 1) return true;
  std::vector<char> seen(static_cast<std::size_t>(g.node_count), 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  NodeId reached = 1;
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    for (std::size_t k = g.offsets[u]; k < g.offsets[u + 1]; ++k) {
      NodeId v = g.adjacency[k].to;
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = 1;
        ++reached;
        stack.push_back(v);
      }
    }
  }
  return reached == g.node_count;
}

}  // namespace

WeightedGraph::WeightedGraph(std::shared_ptr<const detail::GraphData> data) : data_(std::move(data)) {}

WeightedGraph::WeightedGraph() : WeightedGraph(create(1, {})) {}

WeightedGraph WeightedGraph::create(NodeId node_count, std::vector<Edge> edges, bool require_connected) {
  using Kind = ValidationError::Kind;
  if (node_count < 1) throw ValidationError(Kind::bad_argument, "graph needs at least one node");

  for (auto& e : edges) {
    if (e.u < 0 || e.u >= node_count || e.v < 0 || e.v >= node_count)
      throw ValidationError(Kind::node_out_of_range,
                            fmt::format("edge ({}, {}) references a node outside 0..{}", e.u, e.v, node_count - 1));
    if (e.u == e.v) throw ValidationError(Kind::self_loop, fmt::format("self-loop at node {}", e.u));
    if (e.w < 1) throw ValidationError(Kind::zero_weight, fmt::format("edge ({}, {}) has weight {} < 1", e.u, e.v, e.w));
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  for (std::size_t k = 1; k < edges.size(); ++k) {
    if (edges[k].u == edges[k - 1].u && edges[k].v == edges[k - 1].v)
      throw ValidationError(Kind::duplicate_edge, fmt::format("duplicate edge ({}, {})", edges[k].u, edges[k].v));
  }

  auto data = std::make_shared<detail::GraphData>();
  data->node_count = node_count;
  data->edges = std::move(edges);

  const auto n = static_cast<std::size_t>(node_count);
  std::vector<std::size_t> degree(n, 0);
  for (const auto& e : data->edges) {
    ++degree[static_cast<std::size_t>(e.u)];
    ++degree[static_cast<std::size_t>(e.v)];
  }
  data->offsets.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) data->offsets[v + 1] = data->offsets[v] + degree[v];
  data->adjacency.resize(data->offsets[n]);
  std::vector<std::size_t> fill(data->offsets.begin(), data->offsets.end() - 1);
  for (const auto& e : data->edges) {
    data->adjacency[fill[static_cast<std::size_t>(e.u)]++] = {e.v, e.w};
    data->adjacency[fill[static_cast<std::size_t>(e.v)]++] = {e.u, e.w};
  }
  for (std::size_t v = 0; v < n; ++v) {
    std::sort(data->adjacency.begin() + static_cast<std::ptrdiff_t>(data->offsets[v]),
              data->adjacency.begin() + static_cast<std::ptrdiff_t>(data->offsets[v + 1]),
              [](const Neighbor& a, const Neighbor& b) { return a.to < b.to; });
  }

  data->connected = is_connected(*data);
  if (require_connected && !data->connected)
    throw ValidationError(Kind::disconnected, "graph is not connected");

  std::uint64_t h = 0xcbf29ce484222325ULL;
  h = fnv1a(h, static_cast<std::uint64_t>(node_count));
  for (const auto& e : data->edges) {
    h = fnv1a(h, static_cast<std::uint64_t>(e.u));
    h = fnv1a(h, static_cast<std::uint64_t>(e.v));
    h = fnv1a(h, static_cast<std::uint64_t>(e.w));
  }
  data->hash = h;
  data->cache = std::make_unique<detail::MetricCache>(*data);
  return WeightedGraph(std::move(data));
}

NodeId WeightedGraph::node_count() const noexcept { return data_->node_count; }
std::size_t WeightedGraph::edge_count() const noexcept { return data_->edges.size(); }
std::span<const Edge> WeightedGraph::edges() const noexcept { return data_->edges; }
bool WeightedGraph::connected() const noexcept { return data_->connected; }
std::uint64_t WeightedGraph::hash() const noexcept { return data_->hash; }

std::span<const Neighbor> WeightedGraph::neighbors(NodeId u) const {
  if (!valid(u)) throw std::out_of_range(fmt::format("node {} out of range", u));
  const auto& d = *data_;
  return {d.adjacency.data() + d.offsets[u], d.offsets[u + 1] - d.offsets[u]};
}

Weight WeightedGraph::edge_weight(NodeId u, NodeId v) const {
  auto nbrs = neighbors(u);
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v,
                             [](const Neighbor& nb, NodeId id) { return nb.to < id; });
  return (it != nbrs.end() && it->to == v) ? it->w : kInfinity;
}

Weight WeightedGraph::distance(NodeId from, NodeId to) const {
  return distances_from(from)[static_cast<std::size_t>(to)];
}

std::span<const Weight> WeightedGraph::distances_from(NodeId from) const {
  if (!valid(from)) throw std::out_of_range(fmt::format("node {} out of range", from));
  return data_->cache->row(from).dist;
}

std::span<const NodeId> WeightedGraph::predecessors_from(NodeId from) const {
  if (!valid(from)) throw std::out_of_range(fmt::format("node {} out of range", from));
  return data_->cache->row(from).pred;
}

namespace {

template <typename Int>
bool parse_int(std::string_view token, Int& out) {
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc{} && ptr == token.data() + token.size();
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t k = 0;
  while (k < line.size()) {
    while (k < line.size() && (line[k] == ' ' || line[k] == '\t' || line[k] == '\r')) ++k;
    std::size_t start = k;
    while (k < line.size() && line[k] != ' ' && line[k] != '\t' && line[k] != '\r') ++k;
    if (k > start) out.push_back(line.substr(start, k - start));
  }
  return out;
}

}  // namespace

WeightedGraph load_graph(std::string_view text) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool have_header = false;
  NodeId n = 0;
  std::size_t m = 0;
  std::vector<Edge> edges;

  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    auto tokens = split_ws(line);
    if (tokens.empty() || tokens.front().front() == '#') {
      if (eol == text.size()) break;
      continue;
    }
    if (!have_header) {
      if (tokens.size() != 2 || !parse_int(tokens[0], n) || !parse_int(tokens[1], m) || n < 1)
        throw ParseError(line_no, "expected header \"n m\" with n >= 1");
      have_header = true;
      edges.reserve(m);
    } else {
      Edge e{};
      if (tokens.size() != 3 || !parse_int(tokens[0], e.u) || !parse_int(tokens[1], e.v) ||
          !parse_int(tokens[2], e.w))
        throw ParseError(line_no, "expected edge line \"u v w\"");
      if (edges.size() == m) throw ParseError(line_no, fmt::format("more than the declared {} edges", m));
      edges.push_back(e);
    }
    if (eol == text.size()) break;
  }
  if (!have_header) throw ParseError(line_no, "missing header line");
  if (edges.size() != m)
    throw ParseError(line_no, fmt::format("declared {} edges but found {}", m, edges.size()));
  return WeightedGraph::create(n, std::move(edges));
}

WeightedGraph load_graph_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open graph file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_graph(buffer.str());
}

std::string format_graph(const WeightedGraph& g) {
  std::string out = fmt::format("{} {}\n", g.node_count(), g.edge_count());
  for (const auto& e : g.edges()) out += fmt::format("{} {} {}\n", e.u, e.v, e.w);
  return out;
}

}  // namespace ost
