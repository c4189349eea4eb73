#include "spreadlab/generators.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "spreadlab/errors.hpp"
#include "spreadlab/rng.hpp"

namespace spreadlab {

WeightedGraph erdos_renyi(NodeId n, double avg_degree,
                          std::uint64_t rng_seed) {
  if (avg_degree < 0.0) throw ArgumentError("avg_degree must be >= 0");

  std::vector<LabeledEdge> edges;
  if (n >= 2 && avg_degree > 0.0) {
    const double p = std::min(1.0, avg_degree / (2.0 * (n - 1)));
    const std::uint64_t pairs =
        static_cast<std::uint64_t>(n) * (n - 1);  // ordered pairs, no diagonal
    edges.reserve(static_cast<std::size_t>(p * pairs * 1.1) + 16);

    RandomStream stream = RandomStream::substream(rng_seed, 0x6572ULL);
    if (p >= 1.0) {
      for (std::uint64_t idx = 0; idx < pairs; ++idx) {
        const NodeId u = static_cast<NodeId>(idx / (n - 1));
        const std::uint64_t r = idx % (n - 1);
        const NodeId v = static_cast<NodeId>(r < u ? r : r + 1);
        edges.push_back({u, v});
      }
    } else {
      // Geometric skipping over the linearized pair space.
      const double log_q = std::log1p(-p);
      std::uint64_t idx = 0;
      while (true) {
        const double u01 = stream.next_unit();
        const double skip = std::floor(std::log1p(-u01) / log_q);
        if (skip >= static_cast<double>(pairs - idx)) break;
        idx += static_cast<std::uint64_t>(skip);
        const NodeId u = static_cast<NodeId>(idx / (n - 1));
        const std::uint64_t r = idx % (n - 1);
        const NodeId v = static_cast<NodeId>(r < u ? r : r + 1);
        edges.push_back({u, v});
        if (++idx >= pairs) break;
      }
    }
  }
  return WeightedGraph::from_dense_edges(n, edges);
}

WeightedGraph preferential_attachment(NodeId n, double avg_degree,
                                      std::uint64_t rng_seed) {
  if (avg_degree < 0.0) throw ArgumentError("avg_degree must be >= 0");

  const auto d = static_cast<std::uint32_t>(
      std::llround(std::max(1.0, avg_degree / 2.0)));
  RandomStream stream = RandomStream::substream(rng_seed, 0x7061ULL);

  // Attachment pool: node v appears in-degree(v) + 1 times, so a uniform
  // pool draw is an (in-degree + 1)-weighted node draw.
  std::vector<NodeId> pool;
  std::vector<LabeledEdge> edges;
  if (n >= 1) pool.push_back(0);

  std::vector<NodeId> chosen;
  for (NodeId u = 1; u < n; ++u) {
    const std::uint32_t out = std::min<std::uint32_t>(d, u);
    chosen.clear();
    std::uint32_t attempts = 0;
    while (chosen.size() < out && attempts < 32 * out) {
      ++attempts;
      NodeId t = pool[stream.next_below(static_cast<std::uint32_t>(pool.size()))];
      if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) {
        chosen.push_back(t);
      }
    }
    // Degenerate pools (tiny graphs) may stall; fill uniformly.
    for (NodeId t = 0; chosen.size() < out && t < u; ++t) {
      if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) {
        chosen.push_back(t);
      }
    }
    for (NodeId t : chosen) {
      edges.push_back({u, t});
      pool.push_back(t);
    }
    pool.push_back(u);
  }
  return WeightedGraph::from_dense_edges(n, edges);
}

}  // namespace spreadlab
