#include "ost/fusion.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "ost/error.hpp"

namespace ost {
namespace {

std::string format_number(double x) { return fmt::format("{}", x); }

double parse_parameter(std::string_view spec, std::string_view text) {
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value))
    throw ParseError(0, fmt::format("bad parameter '{}' in fusion function '{}'", text, spec));
  return value;
}

NodeSet checked_sources(const WeightedGraph& g, std::span<const NodeId> sources) {
  for (NodeId a : sources)
    if (!g.valid(a))
      throw ValidationError(ValidationError::Kind::node_out_of_range, fmt::format("source {} out of range", a));
  return make_node_set({sources.begin(), sources.end()});
}

}  // namespace

FusionFunction FusionFunction::constant(double c) {
  if (!(c > 0)) throw ValidationError(ValidationError::Kind::bad_argument, "constant fusion needs c > 0");
  return {"constant:" + format_number(c), [c](std::int64_t) { return c; }};
}

FusionFunction FusionFunction::linear() {
  return {"linear", [](std::int64_t x) { return static_cast<double>(x); }};
}

FusionFunction FusionFunction::sqrt() {
  return {"sqrt", [](std::int64_t x) { return std::sqrt(static_cast<double>(x)); }};
}

FusionFunction FusionFunction::log1p() {
  return {"log1p", [](std::int64_t x) { return std::log1p(static_cast<double>(x)); }};
}

FusionFunction FusionFunction::power(double alpha) {
  if (!(alpha > 0 && alpha <= 1))
    throw ValidationError(ValidationError::Kind::bad_argument, "power fusion needs alpha in (0, 1]");
  return {"power:" + format_number(alpha), [alpha](std::int64_t x) { return std::pow(static_cast<double>(x), alpha); }};
}

FusionFunction FusionFunction::cap(double c) {
  if (!(c > 0)) throw ValidationError(ValidationError::Kind::bad_argument, "cap fusion needs c > 0");
  return {"cap:" + format_number(c), [c](std::int64_t x) { return std::min(static_cast<double>(x), c); }};
}

FusionFunction FusionFunction::scaled(double factor) const {
  return {fmt::format("{}*{}", format_number(factor), name_), [eval = eval_, factor](std::int64_t x) { return factor * eval(x); }};
}

FusionFunction parse_fusion_function(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string_view name = spec.substr(0, colon);
  const bool has_param = colon != std::string_view::npos;
  auto param = [&] {
    if (!has_param) throw ParseError(0, fmt::format("fusion function '{}' needs a parameter", spec));
    return parse_parameter(spec, spec.substr(colon + 1));
  };
  auto no_param = [&] {
    if (has_param) throw ParseError(0, fmt::format("fusion function '{}' takes no parameter", spec));
  };
  try {
    if (name == "constant") return FusionFunction::constant(param());
    if (name == "power") return FusionFunction::power(param());
    if (name == "cap") return FusionFunction::cap(param());
    if (name == "linear") return no_param(), FusionFunction::linear();
    if (name == "sqrt") return no_param(), FusionFunction::sqrt();
    if (name == "log1p") return no_param(), FusionFunction::log1p();
  } catch (const ValidationError& e) {
    throw ParseError(0, e.what());
  }
  throw ParseError(0, fmt::format("unknown fusion function '{}'", spec));
}

std::vector<FusionViolation> validate_fusion_function(const FusionFunction::Eval& eval, std::int64_t max_x) {
  if (max_x < 1) throw ValidationError(ValidationError::Kind::bad_argument, "max_x must be >= 1");
  constexpr double kTolerance = 1e-9;
  std::vector<FusionViolation> out;
  std::vector<double> v(static_cast<std::size_t>(max_x) + 1);
  for (std::int64_t x = 0; x <= max_x; ++x) v[static_cast<std::size_t>(x)] = eval(x);
  if (v[0] != 0) out.push_back({"zero", 0, fmt::format("f(0) = {}", v[0])});
  for (std::int64_t x = 0; x < max_x; ++x) {
    const double step = v[static_cast<std::size_t>(x) + 1] - v[static_cast<std::size_t>(x)];
    if (step < -kTolerance) out.push_back({"monotone", x, fmt::format("f({}) < f({})", x + 1, x)});
    if (x >= 1) {
      const double prev = v[static_cast<std::size_t>(x)] - v[static_cast<std::size_t>(x) - 1];
      if (step > prev + kTolerance)
        out.push_back({"concave", x, fmt::format("f({})-f({}) = {} > f({})-f({}) = {}", x + 1, x, step, x, x - 1, prev)});
    }
  }
  return out;
}

std::vector<FusionViolation> validate_fusion_function(const FusionFunction& f, std::int64_t max_x) {
  return validate_fusion_function([&f](std::int64_t x) { return f(x); }, max_x);
}

int size_bin(double size) {
  if (!(size >= 2)) return 0;
  return static_cast<int>(std::floor(std::log2(size)));
}

FusionTrace simulate_rounds(const ObliviousTree& tree, std::span<const NodeId> sources, const FusionFunction& f) {
  const NodeSet a = checked_sources(tree.graph, sources);
  FusionTrace trace;
  trace.kappa = tree.kappa();
  trace.source_count = static_cast<std::int64_t>(a.size());
  trace.rounds.resize(static_cast<std::size_t>(trace.kappa));
  trace.bins.resize(static_cast<std::size_t>(trace.kappa));
  trace.round_cost.assign(static_cast<std::size_t>(trace.kappa), 0.0);

  // holders: level-(i-1) leader -> |A ∩ Z_{i-1}^u|; at level 0 every source holds itself.
  std::map<NodeId, std::int64_t> holders;
  for (NodeId v : a) holders[v] = 1;

  for (int i = 1; i <= trace.kappa; ++i) {
    auto& msgs = trace.rounds[static_cast<std::size_t>(i - 1)];
    auto& bins = trace.bins[static_cast<std::size_t>(i - 1)];
    std::map<NodeId, std::int64_t> next;
    for (const auto& [u, count] : holders) {
      if (tree.effective_level[static_cast<std::size_t>(u)] >= i) {
        next[u] += count;
        continue;
      }
      const TreePath& p = tree.path(tree.outgoing[static_cast<std::size_t>(u)]);
      next[p.end()] += count;
      const double size = f(count);
      if (size <= 0) continue;
      FusionMessage m;
      m.round = i;
      m.sender = u;
      m.receiver = p.end();
      m.path = p.id;
      m.count = count;
      m.size = size;
      m.path_length = p.length;
      m.cost = size * static_cast<double>(p.length);
      m.bin = size_bin(size);
      bins[m.bin].push_back(u);
      trace.round_cost[static_cast<std::size_t>(i - 1)] += m.cost;
      msgs.push_back(m);
    }
    holders = std::move(next);
  }
  for (double q : trace.round_cost) trace.total_cost += q;
  auto at_sink = holders.find(tree.sink());
  trace.sink_count = at_sink == holders.end() ? 0 : at_sink->second;
  return trace;
}

std::string format_trace(const FusionTrace& trace) {
  std::ostringstream out;
  out << "# round sender receiver count size length cost\n";
  for (const auto& round : trace.rounds)
    for (const auto& m : round)
      out << fmt::format("{} {} {} {} {} {} {}\n", m.round, m.sender, m.receiver, m.count, m.size, m.path_length, m.cost);
  return out.str();
}

double tree_cost(const WeightedGraph& g, const RootedTree& tree, std::span<const NodeId> sources,
                 const FusionFunction& f) {
  const NodeSet a = checked_sources(g, sources);
  const auto n = static_cast<std::size_t>(g.node_count());
  if (tree.parent.size() != n) throw ValidationError(ValidationError::Kind::mismatch, "tree size does not match graph");

  // Children lists, then a BFS order from the root; reversed it is a valid
  // accumulation order.
  std::vector<std::vector<NodeId>> children(n);
  for (std::size_t v = 0; v < n; ++v)
    if (tree.parent[v] != kNoNode) children[static_cast<std::size_t>(tree.parent[v])].push_back(static_cast<NodeId>(v));
  std::vector<NodeId> order{tree.root};
  for (std::size_t k = 0; k < order.size(); ++k)
    for (NodeId c : children[static_cast<std::size_t>(order[k])]) order.push_back(c);
  if (order.size() != n) throw ValidationError(ValidationError::Kind::mismatch, "parent map is not a spanning tree");

  std::vector<std::int64_t> below(n, 0);
  for (NodeId v : a) below[static_cast<std::size_t>(v)] = 1;
  double total = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto v = static_cast<std::size_t>(*it);
    const NodeId p = tree.parent[v];
    if (p == kNoNode) continue;
    below[static_cast<std::size_t>(p)] += below[v];
    if (below[v] > 0) total += static_cast<double>(g.edge_weight(*it, p)) * f(below[v]);
  }
  return total;
}

RootedTree rooted(const ObliviousTree& tree) { return {tree.sink(), tree.tree_parent}; }

std::vector<RoundBoundCheck> check_round_upper_bound(const FusionTrace& trace) {
  std::vector<RoundBoundCheck> out;
  for (int i = 1; i <= static_cast<int>(trace.rounds.size()); ++i) {
    std::map<int, double> cost;
    for (const auto& m : trace.rounds[static_cast<std::size_t>(i - 1)]) cost[m.bin] += m.cost;
    for (const auto& [j, senders] : trace.bins[static_cast<std::size_t>(i - 1)]) {
      RoundBoundCheck c;
      c.round = i;
      c.bin = j;
      c.senders = senders.size();
      c.cost = cost[j];
      c.limit = static_cast<double>(senders.size()) * 6.0 * std::ldexp(1.0, i + j);
      c.passed = c.cost <= c.limit;
      out.push_back(c);
    }
  }
  return out;
}

std::vector<LowerBoundCheck> check_simple_lower_bound(const FusionTrace& trace, double c_star) {
  std::vector<LowerBoundCheck> out;
  for (const auto& round : trace.rounds)
    for (const auto& m : round) {
      LowerBoundCheck c;
      c.round = m.round;
      c.bin = m.bin;
      c.sender = m.sender;
      c.threshold = std::max(std::ldexp(1.0, m.round + m.bin - 1), 1.0);
      c.passed = c_star > c.threshold;
      out.push_back(c);
    }
  return out;
}

double theoretical_ratio_bound(double rho, Weight diameter, NodeId /*node_count*/, std::int64_t num_sources) {
  if (rho < 0 || diameter < 1 || num_sources < 1)
    throw ValidationError(ValidationError::Kind::bad_argument, "bound needs rho >= 0, D >= 1, sources >= 1");
  int kappa = 1;
  while ((Weight{1} << kappa) < diameter) ++kappa;
  int lambda = 0;
  while ((std::int64_t{1} << lambda) < num_sources) ++lambda;
  const double k = kappa;
  return k * (lambda + 1) * 24.0 * (std::exp2(10.0 * rho) * (k + 1) * (k + 1) + 1);
}

std::map<NodeId, int> assign_time_slots(const TreePath& path) {
  std::map<NodeId, int> out;
  for (std::size_t k = 0; k < path.nodes.size(); ++k) out[path.nodes[k]] = static_cast<int>(k) + 1;
  return out;
}

std::vector<std::vector<SlotAssignment>> node_schedules(const ObliviousTree& tree) {
  std::vector<std::vector<SlotAssignment>> out(static_cast<std::size_t>(tree.graph.node_count()));
  for (const auto& p : tree.paths) {
    if (p.kind == PathKind::pruned) continue;
    for (std::size_t k = 0; k < p.nodes.size(); ++k)
      out[static_cast<std::size_t>(p.nodes[k])].push_back({p.id, static_cast<int>(k) + 1});
  }
  return out;
}

}  // namespace ost
