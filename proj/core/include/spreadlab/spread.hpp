#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include "spreadlab/graph.hpp"
#include "spreadlab/snapshot.hpp"

namespace spreadlab {

/// Ordered set of seed nodes; insertion order is selection order.
/// Duplicate insertion is a no-op.
class SeedSet {
public:
  SeedSet() = default;
  SeedSet(std::initializer_list<NodeId> members);
  explicit SeedSet(std::vector<NodeId> members);  // ArgumentError on dups

  /// Returns false (and changes nothing) when v is already a member.
  bool add(NodeId v);
  bool contains(NodeId v) const;

  std::span<const NodeId> members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }

private:
  std::vector<NodeId> members_;
};

enum class EstimatorKind { snapshot, simulation, exact };

/// A spread value with its provenance. `samples` is R for the snapshot
/// estimator, the round count for simulation, and 0 for exact. `variance`
/// is the unbiased sample variance of the per-sample activated counts
/// (0 for exact); the standard error of `value` is sqrt(variance/samples).
struct SpreadEstimate {
  double value = 0.0;
  EstimatorKind estimator = EstimatorKind::exact;
  std::uint64_t samples = 0;
  std::optional<std::uint64_t> rng_seed;
  double variance = 0.0;
};

/// Number of nodes reachable from the seeds via retained edges; seeds count
/// themselves. Empty seed set returns 0.
std::uint32_t reachable_count(const Snapshot& snap, const SeedSet& seeds);

/// Total coverage count over all snapshots: sum_j reachable_count(ss[j], S).
/// Integer-exact; the workhorse behind snapshot_spread and the greedy
/// selection rules.
std::uint64_t coverage_sum(const SnapshotSet& ss, const SeedSet& seeds);

/// Snapshot estimator: mean reachable count over the set. Deterministic
/// given ss. ss must be nonempty.
SpreadEstimate snapshot_spread(const SnapshotSet& ss, const SeedSet& seeds);

/// Simulation estimator: runs the layered independent-cascade diffusion
/// `rounds` times (round r uses substream (rng_seed, r)) and averages the
/// final activated counts. Each activated node gets one chance per
/// inactive out-neighbor. rounds must be >= 1.
SpreadEstimate simulate_spread(const WeightedGraph& g, const SeedSet& seeds,
                               std::size_t rounds, std::uint64_t rng_seed);

/// Exact expected spread by enumerating all 2^|E| edge realizations,
/// weighting each by prod(p) * prod(1-p). Verification oracle; guarded by
/// CapacityError for |E| > 24.
SpreadEstimate exact_spread(const WeightedGraph& g, const SeedSet& seeds);

constexpr EdgeId kExactSpreadMaxEdges = 24;

/// Cumulative snapshot spread of every prefix of the seed sequence
/// (prefix_spreads(ss, S)[i] covers seeds[0..i]). Used to score baseline
/// seed lists after the fact.
std::vector<double> prefix_spreads(const SnapshotSet& ss, const SeedSet& seeds);

}  // namespace spreadlab
