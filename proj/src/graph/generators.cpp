#include "ost/generators.hpp"

#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "ost/error.hpp"
#include "ost/random.hpp"

namespace ost {

WeightedGraph generate_grid(std::int64_t rows, std::int64_t cols, Weight weight) {
  using Kind = ValidationError::Kind;
  if (rows < 1 || cols < 1) throw ValidationError(Kind::bad_argument, "grid needs rows >= 1 and cols >= 1");
  if (weight < 1) throw ValidationError(Kind::zero_weight, "grid weight must be >= 1");
  if (rows > std::numeric_limits<NodeId>::max() / cols)
    throw ValidationError(Kind::bad_argument, fmt::format("grid {}x{} overflows the node id range", rows, cols));

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(2 * rows * cols));
  auto id = [cols](std::int64_t r, std::int64_t c) { return static_cast<NodeId>(r * cols + c); };
  for (std::int64_t r = 0; r < rows; ++r) {
    for (std::int64_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.push_back({id(r, c), id(r, c + 1), weight});
      if (r + 1 < rows) edges.push_back({id(r, c), id(r + 1, c), weight});
    }
  }
  return WeightedGraph::create(static_cast<NodeId>(rows * cols), std::move(edges));
}

WeightedGraph generate_random_connected(NodeId n, double extra_edge_prob, Weight max_weight, std::uint64_t seed) {
  using Kind = ValidationError::Kind;
  if (n < 1) throw ValidationError(Kind::bad_argument, "n must be >= 1");
  if (!(extra_edge_prob >= 0.0 && extra_edge_prob <= 1.0))
    throw ValidationError(Kind::bad_argument, "extra edge probability must lie in [0, 1]");
  if (max_weight < 1) throw ValidationError(Kind::zero_weight, "max weight must be >= 1");

  Rng rng(seed);
  auto weight = [&] { return static_cast<Weight>(1 + uniform_below(rng, static_cast<std::uint64_t>(max_weight))); };

  std::vector<NodeId> label(static_cast<std::size_t>(n));
  std::iota(label.begin(), label.end(), 0);
  shuffle(label, rng);

  const auto nn = static_cast<std::size_t>(n);
  std::vector<char> present(nn * nn, 0);
  std::vector<Edge> edges;
  for (std::size_t k = 1; k < nn; ++k) {
    NodeId a = label[k];
    NodeId b = label[static_cast<std::size_t>(uniform_below(rng, k))];
    edges.push_back({a, b, weight()});
    present[static_cast<std::size_t>(a) * nn + static_cast<std::size_t>(b)] = 1;
    present[static_cast<std::size_t>(b) * nn + static_cast<std::size_t>(a)] = 1;
  }
  if (extra_edge_prob > 0.0) {
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) {
        if (present[static_cast<std::size_t>(u) * nn + static_cast<std::size_t>(v)]) continue;
        if (uniform_unit(rng) < extra_edge_prob) edges.push_back({u, v, weight()});
      }
    }
  }
  return WeightedGraph::create(n, std::move(edges));
}

}  // namespace ost
