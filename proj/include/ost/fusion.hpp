#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ost/baseline.hpp"
#include "ost/tree.hpp"

namespace ost {

/// f(k): size of k unit items after fusion.
class FusionFunction {
 public:
  using Eval = std::function<double(std::int64_t)>;

  FusionFunction(std::string name, Eval eval) : name_(std::move(name)), eval_(std::move(eval)) {}

  static FusionFunction constant(double c);
  static FusionFunction linear();
  static FusionFunction sqrt();
  static FusionFunction log1p();
  static FusionFunction power(double alpha);
  static FusionFunction cap(double c);

  const std::string& name() const { return name_; }
  double operator()(std::int64_t count) const { return count <= 0 ? 0.0 : eval_(count); }
  /// Multiplies every value by `factor`.
  FusionFunction scaled(double factor) const;

 private:
  std::string name_;
  Eval eval_;
};

/// Parses `constant:c`, `linear`, `sqrt`, `log1p`, `power:alpha`, `cap:c`.
/// Throws ParseError on unknown names or bad parameters.
FusionFunction parse_fusion_function(std::string_view spec);

struct FusionViolation {
  std::string property;  // "zero", "monotone", "concave"
  std::int64_t x = 0;
  std::string detail;
};

/// Checks f(0) = 0, f(x+1) >= f(x) and f(x+1)-f(x) <= f(x)-f(x-1) for
/// x in 0..max_x. The raw evaluator is used, so a nonzero f(0) is caught.
std::vector<FusionViolation> validate_fusion_function(const FusionFunction::Eval& eval, std::int64_t max_x);
std::vector<FusionViolation> validate_fusion_function(const FusionFunction& f, std::int64_t max_x);

/// Bin of a positive data size: max(0, floor(log2 size)).
int size_bin(double size);

struct FusionMessage {
  int round = 0;  // 1..kappa
  NodeId sender = kNoNode;
  NodeId receiver = kNoNode;
  PathId path = kNoPath;
  std::int64_t count = 0;  // sources fused into the message
  double size = 0;
  Weight path_length = 0;
  double cost = 0;
  int bin = 0;
};

struct FusionTrace {
  int kappa = 0;
  std::int64_t source_count = 0;
  /// rounds[i-1]: messages of round i, ordered by sender.
  std::vector<std::vector<FusionMessage>> rounds;
  /// bins[i-1][j]: senders of round i in B_{i-1}^j.
  std::vector<std::map<int, NodeSet>> bins;
  /// round_cost[i-1] = Q_i.
  std::vector<double> round_cost;
  double total_cost = 0;
  /// Sources fused at the sink after the last round.
  std::int64_t sink_count = 0;
};

/// Round i moves the data of every level-(i-1) leader u with A ∩ Z_{i-1}^u
/// nonempty along u's outgoing path, unless u already has effective level
/// >= i. Each message costs f(count) times the path length.
FusionTrace simulate_rounds(const ObliviousTree& tree, std::span<const NodeId> sources, const FusionFunction& f);

/// One line per message: round sender receiver count size length cost.
std::string format_trace(const FusionTrace& trace);

/// Sum over tree edges of w(e) * f(sources below e).
double tree_cost(const WeightedGraph& g, const RootedTree& tree, std::span<const NodeId> sources,
                 const FusionFunction& f);

/// The modified tree's edges rooted at its sink.
RootedTree rooted(const ObliviousTree& tree);

struct RoundBoundCheck {
  int round = 0;  // i; the bin is B_{i-1}^j
  int bin = 0;
  std::size_t senders = 0;
  double cost = 0;
  double limit = 0;  // |B_{i-1}^j| * 6 * 2^{i+j}
  bool passed = true;
};

/// Q_{i-1}^j <= |B_{i-1}^j| * 6 * 2^{i+j} for every nonempty bin.
std::vector<RoundBoundCheck> check_round_upper_bound(const FusionTrace& trace);

struct LowerBoundCheck {
  int round = 0;
  int bin = 0;
  NodeId sender = kNoNode;
  double threshold = 0;  // max(2^{i+j-1}, 1)
  bool passed = true;
};

/// For every message of round i from a B_{i-1}^j sender: c_star > max(2^{i+j-1}, 1).
std::vector<LowerBoundCheck> check_simple_lower_bound(const FusionTrace& trace, double c_star);

/// kappa (lambda+1) 24 (2^{10 rho} (kappa+1)^2 + 1), kappa = ceil(log2 D) (min 1),
/// lambda = ceil(log2 sources) (0 for at most one source).
double theoretical_ratio_bound(double rho, Weight diameter, NodeId node_count, std::int64_t num_sources);

/// Slot k (1-based) for the k-th node from the path's start.
std::map<NodeId, int> assign_time_slots(const TreePath& path);

struct SlotAssignment {
  PathId path = kNoPath;
  int slot = 0;
};

/// Every node's slots, one per path it lies on, ordered by path id.
std::vector<std::vector<SlotAssignment>> node_schedules(const ObliviousTree& tree);

}  // namespace ost
