#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ost/graph.hpp"

namespace ost::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,  // I/O and anything unexpected
  kParseError = 2,
  kValidationError = 3,
  kInstanceTooLarge = 4,
};

/// Runs one ostctl invocation; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

enum class TreeKind { ost, mst, spt };
std::string_view to_string(TreeKind kind);

enum class OracleMode { none, automatic, exact, lower };
enum class Sampling { independent, nested };

struct GraphSource {
  std::string file;  // used when nonempty
  std::string generator = "grid";  // grid | random
  std::int64_t rows = 40;
  std::int64_t cols = 40;
  Weight weight = 1;
  NodeId n = 0;
  double extra_edge_prob = 0.1;
  Weight max_weight = 1;
  std::uint64_t seed = 1;
};

struct ExperimentConfig {
  GraphSource graph;
  NodeId sink = 0;
  std::vector<TreeKind> trees{TreeKind::ost, TreeKind::mst, TreeKind::spt};
  std::vector<std::string> fusions{"constant:1"};
  std::vector<std::int64_t> counts;
  int trials = 1;
  std::uint64_t seed = 1;
  OracleMode oracle = OracleMode::automatic;
  Sampling sampling = Sampling::independent;
  NodeId max_n = 10;
  std::size_t max_terminals = 12;
  int threads = 1;
};

/// JSON object mirroring ExperimentConfig; unknown keys are errors.
ExperimentConfig parse_experiment_config(std::string_view json_text);

/// Largest source count of the default compare schedule.
inline constexpr std::int64_t kDefaultMaxSources = 1445;

/// Geometric sweep 5, 10, 20, ... capped at `limit` (limit itself included).
std::vector<std::int64_t> default_schedule(std::int64_t limit);

WeightedGraph load_experiment_graph(const GraphSource& source);

struct ResultRow {
  int trial = 0;
  std::string graph_id;
  NodeId n = 0;
  NodeId sink = 0;
  std::string fusion;
  std::int64_t num_sources = 0;
  TreeKind tree = TreeKind::ost;
  double cost_tree = 0;
  std::optional<double> cost_rounds;
  std::optional<double> oracle_value;
  std::string oracle_kind;
  std::optional<double> ratio_tree;
};

/// Sources of one (trial, count) point.
std::vector<NodeId> sample_sources(NodeId node_count, std::int64_t count, std::uint64_t master, int trial,
                                   std::size_t count_index, Sampling sampling);

/// Rows in (trial, count, tree, fusion) order, independent of `threads`.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config, const WeightedGraph& g);

std::string format_csv(const std::vector<ResultRow>& rows);

}  // namespace ost::cli
