#include <algorithm>
#include <atomic>
#include <numeric>
#include <mutex>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "ost/cli.hpp"
#include "ost/construct.hpp"
#include "ost/error.hpp"
#include "ost/fusion.hpp"
#include "ost/generators.hpp"
#include "ost/oracle.hpp"
#include "ost/random.hpp"

namespace ost::cli {
namespace {

using nlohmann::json;

template <typename T>
T get(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(0, fmt::format("config key '{}': {}", key, e.what()));
  }
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> known, std::string_view where) {
  for (const auto& [key, value] : obj.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ParseError(0, fmt::format("unknown config key '{}' in {}", key, where));
}

TreeKind parse_tree_kind(const std::string& s) {
  if (s == "ost") return TreeKind::ost;
  if (s == "mst") return TreeKind::mst;
  if (s == "spt") return TreeKind::spt;
  throw ParseError(0, fmt::format("unknown tree kind '{}'", s));
}

struct OracleValue {
  std::optional<double> value;
  std::string kind;
};

OracleValue compute_oracle(const ExperimentConfig& config, const WeightedGraph& g, const std::vector<NodeId>& a,
                           const std::string& spec, const FusionFunction& f) {
  if (config.oracle == OracleMode::none) return {};
  auto result = [](const OracleResult& r) { return OracleValue{r.value, std::string(to_string(r.kind))}; };
  if (config.oracle == OracleMode::exact || (config.oracle == OracleMode::automatic && g.node_count() <= config.max_n)) {
    try {
      return result(optimal_tree_cost_bruteforce(g, a, f, config.sink, config.max_n));
    } catch (const InstanceTooLarge&) {
      if (config.oracle == OracleMode::exact) throw;
    }
  }
  NodeSet terminals = a;
  terminals.push_back(config.sink);
  terminals = make_node_set(std::move(terminals));
  const bool small_steiner = terminals.size() <= config.max_terminals;
  if (config.oracle == OracleMode::automatic) {
    if (spec == "linear") return result(analytic_optimal_linear(g, a, config.sink));
    if (spec.starts_with("constant:") && small_steiner)
      return result(analytic_optimal_constant(g, a, config.sink, f(1), 0, config.max_terminals));
  }
  const Weight steiner = small_steiner ? steiner_weight_dp(g, terminals, config.max_terminals) : Weight{-1};
  return result(concave_lower_bound(g, a, config.sink, f, steiner));
}

std::string format_optional(const std::optional<double>& x) { return x ? fmt::format("{}", *x) : std::string(); }

}  // namespace

std::string_view to_string(TreeKind kind) {
  switch (kind) {
    case TreeKind::ost: return "ost";
    case TreeKind::mst: return "mst";
    case TreeKind::spt: return "spt";
  }
  return "?";
}

std::vector<std::int64_t> default_schedule(std::int64_t limit) {
  std::vector<std::int64_t> out;
  for (std::int64_t c = 5; c < limit; c *= 2) out.push_back(c);
  if (limit >= 1) out.push_back(limit);
  return out;
}

ExperimentConfig parse_experiment_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(0, fmt::format("config is not valid JSON: {}", e.what()));
  }
  if (!root.is_object()) throw ParseError(0, "config must be a JSON object");
  reject_unknown(root,
                 {"graph", "sink", "trees", "fusions", "counts", "trials", "seed", "oracle", "sampling", "max_n",
                  "max_terminals", "threads"},
                 "config");

  ExperimentConfig c;
  if (root.contains("graph")) {
    const json& g = root.at("graph");
    if (!g.is_object()) throw ParseError(0, "config key 'graph' must be an object");
    reject_unknown(g, {"file", "generator", "rows", "cols", "weight", "n", "extra_edge_prob", "max_weight", "seed"},
                   "graph");
    auto& s = c.graph;
    s.file = get(g, "file", s.file);
    s.generator = get(g, "generator", s.generator);
    s.rows = get(g, "rows", s.rows);
    s.cols = get(g, "cols", s.cols);
    s.weight = get(g, "weight", s.weight);
    s.n = get(g, "n", s.n);
    s.extra_edge_prob = get(g, "extra_edge_prob", s.extra_edge_prob);
    s.max_weight = get(g, "max_weight", s.max_weight);
    s.seed = get(g, "seed", s.seed);
    if (s.file.empty() && s.generator != "grid" && s.generator != "random")
      throw ParseError(0, fmt::format("unknown graph generator '{}'", s.generator));
  }
  c.sink = get(root, "sink", c.sink);
  if (root.contains("trees")) {
    c.trees.clear();
    for (const auto& t : get(root, "trees", std::vector<std::string>{})) c.trees.push_back(parse_tree_kind(t));
  }
  c.fusions = get(root, "fusions", c.fusions);
  for (const auto& f : c.fusions) parse_fusion_function(f);
  c.counts = get(root, "counts", c.counts);
  c.trials = get(root, "trials", c.trials);
  c.seed = get(root, "seed", c.seed);
  const auto oracle = get(root, "oracle", std::string("auto"));
  if (oracle == "auto") c.oracle = OracleMode::automatic;
  else if (oracle == "none") c.oracle = OracleMode::none;
  else if (oracle == "exact") c.oracle = OracleMode::exact;
  else if (oracle == "lower") c.oracle = OracleMode::lower;
  else throw ParseError(0, fmt::format("unknown oracle mode '{}'", oracle));
  const auto sampling = get(root, "sampling", std::string("independent"));
  if (sampling == "independent") c.sampling = Sampling::independent;
  else if (sampling == "nested") c.sampling = Sampling::nested;
  else throw ParseError(0, fmt::format("unknown sampling mode '{}'", sampling));
  c.max_n = get(root, "max_n", c.max_n);
  c.max_terminals = get(root, "max_terminals", c.max_terminals);
  c.threads = get(root, "threads", c.threads);

  using Kind = ValidationError::Kind;
  if (c.trials < 1) throw ValidationError(Kind::bad_argument, "trials must be >= 1");
  if (c.trees.empty()) throw ValidationError(Kind::bad_argument, "at least one tree kind is required");
  if (c.fusions.empty()) throw ValidationError(Kind::bad_argument, "at least one fusion function is required");
  if (c.threads < 1) throw ValidationError(Kind::bad_argument, "threads must be >= 1");
  for (auto k : c.counts)
    if (k < 0) throw ValidationError(Kind::bad_argument, "source counts must be >= 0");
  return c;
}

WeightedGraph load_experiment_graph(const GraphSource& s) {
  if (!s.file.empty()) return load_graph_file(s.file);
  if (s.generator == "grid") return generate_grid(s.rows, s.cols, s.weight);
  return generate_random_connected(s.n, s.extra_edge_prob, s.max_weight, s.seed);
}

std::vector<NodeId> sample_sources(NodeId node_count, std::int64_t count, std::uint64_t master, int trial,
                                   std::size_t count_index, Sampling sampling) {
  if (count < 0 || count > node_count)
    throw ValidationError(ValidationError::Kind::bad_argument,
                          fmt::format("source count {} outside 0..{}", count, node_count));
  Rng rng(sampling == Sampling::nested ? derive_seed(master, trial) : derive_seed(master, trial, count_index));
  std::vector<NodeId> perm(static_cast<std::size_t>(node_count));
  std::iota(perm.begin(), perm.end(), 0);
  shuffle(perm, rng);
  perm.resize(static_cast<std::size_t>(count));
  std::sort(perm.begin(), perm.end());
  return perm;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config, const WeightedGraph& g) {
  if (!g.valid(config.sink))
    throw ValidationError(ValidationError::Kind::node_out_of_range, fmt::format("sink {} out of range", config.sink));
  for (auto k : config.counts)
    if (k > g.node_count())
      throw ValidationError(ValidationError::Kind::bad_argument,
                            fmt::format("source count {} exceeds node count {}", k, g.node_count()));

  std::vector<FusionFunction> fusions;
  for (const auto& spec : config.fusions) fusions.push_back(parse_fusion_function(spec));

  std::optional<ObliviousTree> ost_tree;
  std::vector<RootedTree> trees;
  for (TreeKind kind : config.trees) {
    switch (kind) {
      case TreeKind::ost:
        if (!ost_tree) ost_tree = build_oblivious_tree(g, config.sink);
        trees.push_back(rooted(*ost_tree));
        break;
      case TreeKind::mst: trees.push_back(mst(g, config.sink)); break;
      case TreeKind::spt: trees.push_back(spt(g, config.sink)); break;
    }
  }
  const std::string graph_id = fmt::format("{:016x}", g.hash());

  std::vector<std::vector<ResultRow>> per_trial(static_cast<std::size_t>(config.trials));
  auto run_trial = [&](int trial) {
    auto& rows = per_trial[static_cast<std::size_t>(trial)];
    for (std::size_t ci = 0; ci < config.counts.size(); ++ci) {
      const auto a = sample_sources(g.node_count(), config.counts[ci], config.seed, trial, ci, config.sampling);
      std::vector<OracleValue> oracle;
      for (std::size_t fi = 0; fi < fusions.size(); ++fi)
        oracle.push_back(compute_oracle(config, g, a, config.fusions[fi], fusions[fi]));
      for (std::size_t ti = 0; ti < trees.size(); ++ti) {
        for (std::size_t fi = 0; fi < fusions.size(); ++fi) {
          ResultRow r;
          r.trial = trial;
          r.graph_id = graph_id;
          r.n = g.node_count();
          r.sink = config.sink;
          r.fusion = config.fusions[fi];
          r.num_sources = static_cast<std::int64_t>(a.size());
          r.tree = config.trees[ti];
          r.cost_tree = tree_cost(g, trees[ti], a, fusions[fi]);
          if (r.tree == TreeKind::ost) r.cost_rounds = simulate_rounds(*ost_tree, a, fusions[fi]).total_cost;
          r.oracle_value = oracle[fi].value;
          r.oracle_kind = oracle[fi].kind;
          if (r.oracle_value && *r.oracle_value > 0) r.ratio_tree = r.cost_tree / *r.oracle_value;
          rows.push_back(std::move(r));
        }
      }
    }
  };

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int trial = next++; trial < config.trials; trial = next++) {
      try {
        run_trial(trial);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int threads = std::min(config.threads, config.trials);
  std::vector<std::thread> pool;
  for (int k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  std::vector<ResultRow> out;
  for (auto& rows : per_trial)
    for (auto& r : rows) out.push_back(std::move(r));
  return out;
}

std::string format_csv(const std::vector<ResultRow>& rows) {
  std::string out =
      "trial,graph_id,n,sink,fusion,num_sources,tree,cost_tree,cost_rounds,oracle_value,oracle_kind,ratio_tree\n";
  for (const auto& r : rows)
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", r.trial, r.graph_id, r.n, r.sink, r.fusion,
                       r.num_sources, to_string(r.tree), r.cost_tree, format_optional(r.cost_rounds),
                       format_optional(r.oracle_value), r.oracle_kind, format_optional(r.ratio_tree));
  return out;
}

}  // namespace ost::cli
