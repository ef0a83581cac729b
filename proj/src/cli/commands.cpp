#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ost/baseline.hpp"
#include "ost/cli.hpp"
#include "ost/construct.hpp"
#include "ost/error.hpp"
#include "ost/fusion.hpp"
#include "ost/generators.hpp"
#include "ost/oracle.hpp"
#include "ost/serialize.hpp"
#include "ost/validate.hpp"

namespace ost::cli {
namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Error("cannot write file: " + path);
}

/// Writes to `path` when given, otherwise to `out`.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) out << text;
  else write_file(path, text);
}

std::vector<NodeId> parse_source_list(std::string_view text) {
  std::vector<NodeId> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    auto token = text.substr(pos, comma - pos);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    NodeId v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size())
      throw ParseError(0, fmt::format("bad source id '{}'", token));
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

struct SourceOptions {
  std::string list;
  std::int64_t random = -1;

  void add(CLI::App* cmd) {
    cmd->add_option("--sources", list, "Comma-separated source ids");
    cmd->add_option("--random-sources", random, "Draw this many sources uniformly without replacement");
  }

  std::vector<NodeId> resolve(const WeightedGraph& g, std::uint64_t seed) const {
    std::vector<NodeId> a;
    if (random >= 0) {
      a = sample_sources(g.node_count(), random, seed, 0, 0, Sampling::independent);
    } else {
      a = parse_source_list(list);
    }
    for (NodeId v : a)
      if (!g.valid(v))
        throw ValidationError(ValidationError::Kind::node_out_of_range, fmt::format("source {} out of range", v));
    return make_node_set(std::move(a));
  }
};

ObliviousTree load_or_build_tree(const std::string& tree_path, const WeightedGraph& g, NodeId sink) {
  if (tree_path.empty()) return build_oblivious_tree(g, sink);
  return parse_tree(read_file(tree_path), g);
}

std::string simulate_summary(const ObliviousTree& tree, const std::vector<NodeId>& a, const FusionFunction& f,
                             std::optional<double> c_star, const FusionTrace& trace) {
  std::string s;
  s += fmt::format("sources {}\nfusion {}\nkappa {}\n", a.size(), f.name(), trace.kappa);
  s += fmt::format("Q {}\n", trace.total_cost);
  for (std::size_t i = 0; i < trace.round_cost.size(); ++i) s += fmt::format("Q_{} {}\n", i + 1, trace.round_cost[i]);
  std::size_t messages = 0;
  for (const auto& r : trace.rounds) messages += r.size();
  s += fmt::format("messages {}\n", messages);
  s += fmt::format("sink_count {}\n", trace.sink_count);
  s += fmt::format("tree_cost {}\n", tree_cost(tree.graph, rooted(tree), a, f));
  for (std::size_t i = 0; i < trace.bins.size(); ++i)
    for (const auto& [j, senders] : trace.bins[i])
      s += fmt::format("bin round={} j={} senders={}\n", i + 1, j, senders.size());
  for (const auto& c : check_round_upper_bound(trace))
    s += fmt::format("upper_bound round={} j={} cost={} limit={} slack={} {}\n", c.round, c.bin, c.cost, c.limit,
                     c.limit - c.cost, c.passed ? "pass" : "FAIL");
  if (c_star) {
    for (const auto& c : check_simple_lower_bound(trace, *c_star))
      s += fmt::format("lower_bound round={} j={} sender={} c_star={} threshold={} {}\n", c.round, c.bin, c.sender,
                       *c_star, c.threshold, c.passed ? "pass" : "FAIL");
  }
  return s;
}

std::string format_oracle(const OracleResult& r) {
  std::string s = fmt::format("value {}\nkind {}\n", r.value, to_string(r.kind));
  if (!r.witness.empty()) {
    s += fmt::format("witness {}\n", r.witness.size());
    for (const auto& e : r.witness) s += fmt::format("{} {} {}\n", e.u, e.v, e.w);
  }
  return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Oblivious spanning trees for single-sink data fusion", "ostctl"};
  app.require_subcommand(1);
  std::function<void()> action;

  // generate
  std::string gen_kind = "grid";
  std::int64_t rows = 0, cols = 0;
  Weight weight = 1, max_weight = 1;
  NodeId gen_n = 0;
  double extra = 0.1;
  std::uint64_t seed = 1;
  std::string out_path;
  auto* generate = app.add_subcommand("generate", "Write a generated graph");
  generate->add_option("--kind", gen_kind, "grid | random")->check(CLI::IsMember({"grid", "random"}));
  generate->add_option("--rows", rows, "Grid rows");
  generate->add_option("--cols", cols, "Grid columns");
  generate->add_option("--weight", weight, "Grid edge weight");
  generate->add_option("--n", gen_n, "Random graph node count");
  generate->add_option("--p", extra, "Random graph extra-edge probability");
  generate->add_option("--max-weight", max_weight, "Random graph maximum weight");
  generate->add_option("--seed", seed, "Random seed");
  generate->add_option("--out", out_path, "Output file (default stdout)");
  generate->callback([&] {
    action = [&] {
      const WeightedGraph g = gen_kind == "grid" ? generate_grid(rows, cols, weight)
                                                 : generate_random_connected(gen_n, extra, max_weight, seed);
      emit(out_path, format_graph(g), out);
    };
  });

  // build
  std::string graph_path, tree_path, report_path;
  NodeId sink = 0;
  bool lenient = false;
  auto* build = app.add_subcommand("build", "Build and validate the modified tree");
  build->add_option("--graph", graph_path, "Graph file")->required();
  build->add_option("--sink", sink, "Sink node");
  build->add_option("--out", out_path, "Tree file (default stdout, report then goes to stderr)");
  build->add_option("--report", report_path, "Also write the validation report here");
  build->add_flag("--lenient", lenient, "Exit 0 even when validation checks fail");
  build->callback([&] {
    action = [&] {
      const WeightedGraph g = load_graph_file(graph_path);
      const ObliviousTree tree = build_oblivious_tree(g, sink);
      const ValidationReport report = validate_tree(tree);
      const std::string text = report.to_text();
      if (out_path.empty()) {
        out << format_tree(tree);
        err << text;
      } else {
        write_file(out_path, format_tree(tree));
        out << text;
      }
      if (!report_path.empty()) write_file(report_path, text);
      if (!report.all_passed() && !lenient) throw ValidationError(ValidationError::Kind::mismatch, "tree validation failed");
    };
  });

  // simulate
  SourceOptions sim_sources;
  std::string fusion_spec = "linear";
  std::string trace_path;
  std::optional<double> c_star;
  auto* simulate = app.add_subcommand("simulate", "Run the fusion rounds on a tree");
  simulate->add_option("--graph", graph_path, "Graph file")->required();
  simulate->add_option("--tree", tree_path, "Tree file (default: build from the graph)");
  simulate->add_option("--sink", sink, "Sink when building");
  sim_sources.add(simulate);
  simulate->add_option("--fusion", fusion_spec, "Fusion function");
  simulate->add_option("--seed", seed, "Seed for --random-sources");
  simulate->add_option("--trace", trace_path, "Write the message trace here");
  simulate->add_option("--c-star", c_star, "Optimal cost for the lower-bound check");
  simulate->add_option("--out", out_path, "Summary file (default stdout)");
  simulate->callback([&] {
    action = [&] {
      const WeightedGraph g = load_graph_file(graph_path);
      const FusionFunction f = parse_fusion_function(fusion_spec);
      const ObliviousTree tree = load_or_build_tree(tree_path, g, sink);
      const auto a = sim_sources.resolve(g, seed);
      const FusionTrace trace = simulate_rounds(tree, a, f);
      if (!trace_path.empty()) write_file(trace_path, format_trace(trace));
      emit(out_path, simulate_summary(tree, a, f, c_star, trace), out);
    };
  });

  // compare
  std::string config_path;
  std::optional<std::uint64_t> seed_override;
  std::optional<int> threads_override;
  std::optional<NodeId> max_n_override;
  auto* compare = app.add_subcommand("compare", "Run a cost comparison experiment and write CSV");
  compare->add_option("--config", config_path, "Experiment config (JSON)")->required();
  compare->add_option("--seed", seed_override, "Override the master seed");
  compare->add_option("--threads", threads_override, "Override the worker count");
  compare->add_option("--max-n", max_n_override, "Override the exact-oracle node limit");
  compare->add_option("--out", out_path, "CSV file (default stdout)");
  compare->callback([&] {
    action = [&] {
      ExperimentConfig config = parse_experiment_config(read_file(config_path));
      if (seed_override) config.seed = *seed_override;
      if (threads_override) config.threads = std::max(1, *threads_override);
      if (max_n_override) config.max_n = *max_n_override;
      const WeightedGraph g = load_experiment_graph(config.graph);
      if (config.counts.empty()) config.counts = default_schedule(std::min<std::int64_t>(g.node_count(), kDefaultMaxSources));
      emit(out_path, format_csv(run_experiment(config, g)), out);
    };
  });

  // oracle
  SourceOptions oracle_sources;
  std::string oracle_kind = "exact";
  std::optional<NodeId> max_n;
  auto* oracle = app.add_subcommand("oracle", "Optimal or lower-bound fusion cost");
  oracle->add_option("--graph", graph_path, "Graph file")->required();
  oracle->add_option("--sink", sink, "Sink node");
  oracle_sources.add(oracle);
  oracle->add_option("--fusion", fusion_spec, "Fusion function");
  oracle->add_option("--kind", oracle_kind, "exact | linear | constant | steiner-lower | concave-lower")
      ->check(CLI::IsMember({"exact", "linear", "constant", "steiner-lower", "concave-lower"}));
  oracle->add_option("--max-n", max_n, "Node limit for exhaustive methods (default 10 for exact, 12 for constant)");
  oracle->add_option("--seed", seed, "Seed for --random-sources");
  oracle->add_option("--out", out_path, "Output file (default stdout)");
  oracle->callback([&] {
    action = [&] {
      const WeightedGraph g = load_graph_file(graph_path);
      const FusionFunction f = parse_fusion_function(fusion_spec);
      const auto a = oracle_sources.resolve(g, seed);
      OracleResult r;
      if (oracle_kind == "exact") r = optimal_tree_cost_bruteforce(g, a, f, sink, max_n.value_or(kDefaultEnumerationLimit));
      else if (oracle_kind == "linear") r = analytic_optimal_linear(g, a, sink);
      else if (oracle_kind == "constant")
        r = analytic_optimal_constant(g, a, sink, f(1), max_n.value_or(kDefaultSteinerLimit), 12);
      else if (oracle_kind == "steiner-lower") r = steiner_lower_bound(g, a, sink, f);
      else r = concave_lower_bound(g, a, sink, f);
      emit(out_path, format_oracle(r), out);
    };
  });

  // bound
  double rho = 0;
  Weight bound_d = 1;
  NodeId bound_n = 1;
  std::int64_t bound_sources = 1;
  auto* bound = app.add_subcommand("bound", "Evaluate the theoretical approximation bound");
  bound->add_option("--rho", rho, "Doubling dimension");
  bound->add_option("--diameter", bound_d, "Graph diameter D");
  bound->add_option("--n", bound_n, "Node count");
  bound->add_option("--sources", bound_sources, "Number of sources");
  bound->add_option("--out", out_path, "Output file (default stdout)");
  bound->callback([&] {
    action = [&] {
      emit(out_path, fmt::format("{}\n", theoretical_ratio_bound(rho, bound_d, bound_n, bound_sources)), out);
    };
  });

  // doubling
  int samples = 64;
  auto* doubling = app.add_subcommand("doubling", "Estimate the doubling dimension");
  doubling->add_option("--graph", graph_path, "Graph file")->required();
  doubling->add_option("--samples", samples, "Sampled (center, radius) pairs")->check(CLI::PositiveNumber);
  doubling->add_option("--seed", seed, "Random seed");
  doubling->add_option("--out", out_path, "Output file (default stdout)");
  doubling->callback([&] {
    action = [&] {
      const WeightedGraph g = load_graph_file(graph_path);
      emit(out_path, fmt::format("{}\n", estimate_doubling_dimension(g, samples, seed)), out);
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  }

  try {
    action();
    return kOk;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParseError;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return kValidationError;
  } catch (const InstanceTooLarge& e) {
    err << "instance too large: " << e.what() << '\n';
    return kInstanceTooLarge;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace ost::cli
