#include "spreadlab/spread.hpp"

#include <algorithm>
#include <limits>

#include "bfs.hpp"
#include "spreadlab/errors.hpp"
#include "spreadlab/parallel.hpp"
#include "spreadlab/rng.hpp"

namespace spreadlab {

namespace {

void validate_seeds(std::span<const NodeId> seeds, NodeId node_count) {
  for (NodeId s : seeds) {
    if (s >= node_count) {
      throw ArgumentError("seed node id " + std::to_string(s) +
                          " out of range (node count " +
                          std::to_string(node_count) + ")");
    }
  }
}

std::vector<NodeId> ascending(std::span<const NodeId> seeds) {
  std::vector<NodeId> sorted(seeds.begin(), seeds.end());
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

// Per-sample counts -> (mean, unbiased sample variance).
std::pair<double, double> mean_and_variance(std::span<const std::uint32_t> counts) {
  const auto n = static_cast<double>(counts.size());
  std::uint64_t sum = 0;
  std::uint64_t sumsq = 0;
  for (std::uint32_t c : counts) {
    sum += c;
    sumsq += static_cast<std::uint64_t>(c) * c;
  }
  const double mean = static_cast<double>(sum) / n;
  double variance = 0.0;
  if (counts.size() > 1) {
    variance = (static_cast<double>(sumsq) - n * mean * mean) / (n - 1.0);
    variance = std::max(variance, 0.0);
  }
  return {mean, variance};
}

}  // namespace

SeedSet::SeedSet(std::initializer_list<NodeId> members) {
  for (NodeId v : members) add(v);
}

SeedSet::SeedSet(std::vector<NodeId> members) {
  for (NodeId v : members) {
    if (!add(v)) {
      throw ArgumentError("duplicate seed node id " + std::to_string(v));
    }
  }
}

bool SeedSet::add(NodeId v) {
  if (contains(v)) return false;
  members_.push_back(v);
  return true;
}

bool SeedSet::contains(NodeId v) const {
  return std::find(members_.begin(), members_.end(), v) != members_.end();
}

std::uint32_t reachable_count(const Snapshot& snap, const SeedSet& seeds) {
  validate_seeds(seeds.members(), snap.node_count());
  if (seeds.empty()) return 0;
  detail::VisitScratch scratch;
  scratch.prepare(snap.node_count());
  auto sorted = ascending(seeds.members());
  return detail::reach_count(snap, sorted, scratch);
}

std::uint64_t coverage_sum(const SnapshotSet& ss, const SeedSet& seeds) {
  validate_seeds(seeds.members(), ss.node_count());
  if (seeds.empty() || ss.empty()) return 0;

  auto sorted = ascending(seeds.members());
  std::vector<std::uint32_t> counts(ss.size());
  parallel_ranges(
      ss.size(),
      [&](std::size_t lo, std::size_t hi) {
        detail::VisitScratch scratch;
        scratch.prepare(ss.node_count());
        for (std::size_t j = lo; j < hi; ++j) {
          counts[j] = detail::reach_count(ss[j], sorted, scratch);
        }
      },
      parallel_threshold(ss.parent_edge_count()));

  std::uint64_t total = 0;
  for (std::uint32_t c : counts) total += c;
  return total;
}

SpreadEstimate snapshot_spread(const SnapshotSet& ss, const SeedSet& seeds) {
  if (ss.empty()) throw ArgumentError("snapshot set is empty");
  validate_seeds(seeds.members(), ss.node_count());

  SpreadEstimate est;
  est.estimator = EstimatorKind::snapshot;
  est.samples = ss.size();
  est.rng_seed = ss.rng_seed();
  if (seeds.empty()) return est;

  auto sorted = ascending(seeds.members());
  std::vector<std::uint32_t> counts(ss.size());
  parallel_ranges(
      ss.size(),
      [&](std::size_t lo, std::size_t hi) {
        detail::VisitScratch scratch;
        scratch.prepare(ss.node_count());
        for (std::size_t j = lo; j < hi; ++j) {
          counts[j] = detail::reach_count(ss[j], sorted, scratch);
        }
      },
      parallel_threshold(ss.parent_edge_count()));
  auto [mean, variance] = mean_and_variance(counts);
  est.value = mean;
  est.variance = variance;
  return est;
}

SpreadEstimate simulate_spread(const WeightedGraph& g, const SeedSet& seeds,
                               std::size_t rounds, std::uint64_t rng_seed) {
  if (rounds < 1) throw ArgumentError("simulation rounds must be >= 1");
  if (!g.has_probabilities()) {
    throw ConfigError("graph has unassigned edge probabilities");
  }
  validate_seeds(seeds.members(), g.node_count());

  SpreadEstimate est;
  est.estimator = EstimatorKind::simulation;
  est.samples = rounds;
  est.rng_seed = rng_seed;
  if (seeds.empty()) return est;

  std::vector<std::uint32_t> counts(rounds);
  parallel_ranges(rounds, [&](std::size_t lo, std::size_t hi) {
    detail::VisitScratch active;
    active.prepare(g.node_count());
    std::vector<NodeId> frontier;
    std::vector<NodeId> next;

    for (std::size_t r = lo; r < hi; ++r) {
      RandomStream stream = RandomStream::substream(rng_seed, r);
      active.begin_pass();
      frontier.clear();
      std::uint32_t activated = 0;
      for (NodeId s : seeds.members()) {
        if (active.mark(s)) {
          frontier.push_back(s);
          ++activated;
        }
      }
      // Layered cascade: each newly active node gets one chance per
      // still-inactive out-neighbor.
      while (!frontier.empty()) {
        next.clear();
        for (NodeId u : frontier) {
          for (EdgeId e = g.out_begin(u); e < g.out_end(u); ++e) {
            NodeId v = g.edge_target(e);
            if (active.seen(v)) continue;
            if (stream.next_unit() < g.edge_probability(e)) {
              active.mark(v);
              next.push_back(v);
              ++activated;
            }
          }
        }
        frontier.swap(next);
      }
      counts[r] = activated;
    }
  }, parallel_threshold(g.edge_count()));

  auto [mean, variance] = mean_and_variance(counts);
  est.value = mean;
  est.variance = variance;
  return est;
}

SpreadEstimate exact_spread(const WeightedGraph& g, const SeedSet& seeds) {
  if (g.edge_count() > kExactSpreadMaxEdges) {
    throw CapacityError("exact_spread enumerates 2^|E| realizations; |E| = " +
                        std::to_string(g.edge_count()) + " exceeds the bound of " +
                        std::to_string(kExactSpreadMaxEdges));
  }
  if (!g.has_probabilities()) {
    throw ConfigError("graph has unassigned edge probabilities");
  }
  validate_seeds(seeds.members(), g.node_count());

  SpreadEstimate est;
  est.estimator = EstimatorKind::exact;
  if (seeds.empty()) return est;

  // Compact the universe to edge endpoints plus seeds; everything else is
  // unreachable and contributes nothing.
  const NodeId invalid = std::numeric_limits<NodeId>::max();
  std::vector<NodeId> compact_of(g.node_count(), invalid);
  std::vector<NodeId> compact_nodes;
  auto intern = [&](NodeId v) {
    if (compact_of[v] == invalid) {
      compact_of[v] = static_cast<NodeId>(compact_nodes.size());
      compact_nodes.push_back(v);
    }
    return compact_of[v];
  };

  const EdgeId m = g.edge_count();
  struct CompactEdge {
    NodeId source;
    NodeId target;
    double p;
  };
  std::vector<CompactEdge> edges(m);
  for (EdgeId e = 0; e < m; ++e) {
    edges[e] = {intern(g.edge_source(e)), intern(g.edge_target(e)),
                g.edge_probability(e)};
  }
  std::vector<NodeId> compact_seeds;
  for (NodeId s : seeds.members()) compact_seeds.push_back(intern(s));

  const auto nc = static_cast<NodeId>(compact_nodes.size());

  // Adjacency over compact ids with the owning edge bit.
  std::vector<std::vector<std::pair<EdgeId, NodeId>>> adj(nc);
  for (EdgeId e = 0; e < m; ++e) {
    adj[edges[e].source].emplace_back(e, edges[e].target);
  }

  detail::VisitScratch scratch;
  scratch.prepare(nc);

  double total = 0.0;
  const std::uint32_t realizations = 1u << m;
  for (std::uint32_t mask = 0; mask < realizations; ++mask) {
    double prob = 1.0;
    for (EdgeId e = 0; e < m; ++e) {
      prob *= (mask >> e) & 1u ? edges[e].p : 1.0 - edges[e].p;
      if (prob == 0.0) break;
    }
    if (prob == 0.0) continue;

    scratch.begin_pass();
    scratch.stack.clear();
    std::uint32_t count = 0;
    for (NodeId s : compact_seeds) {
      if (scratch.mark(s)) {
        ++count;
        scratch.stack.push_back(s);
      }
    }
    while (!scratch.stack.empty()) {
      NodeId u = scratch.stack.back();
      scratch.stack.pop_back();
      for (auto [e, v] : adj[u]) {
        if ((mask >> e) & 1u && scratch.mark(v)) {
          ++count;
          scratch.stack.push_back(v);
        }
      }
    }
    total += prob * count;
  }

  est.value = total;
  return est;
}

std::vector<double> prefix_spreads(const SnapshotSet& ss, const SeedSet& seeds) {
  if (ss.empty()) throw ArgumentError("snapshot set is empty");
  validate_seeds(seeds.members(), ss.node_count());

  std::vector<std::uint64_t> prefix_sums(seeds.size(), 0);
  detail::NodeBits covered;
  std::vector<NodeId> stack;
  for (const Snapshot& snap : ss) {
    covered.assign(ss.node_count());
    std::uint64_t cum = 0;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      cum += detail::absorb_reach(snap, seeds.members()[i], covered, stack);
      prefix_sums[i] += cum;
    }
  }

  std::vector<double> out(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    out[i] = static_cast<double>(prefix_sums[i]) / static_cast<double>(ss.size());
  }
  return out;
}

}  // namespace spreadlab
