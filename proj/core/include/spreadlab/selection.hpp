#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "spreadlab/graph.hpp"
#include "spreadlab/snapshot.hpp"
#include "spreadlab/spread.hpp"

namespace spreadlab {

struct PhaseTimes {
  double sampling_ms = 0.0;
  double selection_ms = 0.0;
};

/// Outcome of a seed-selection run. For the greedy algorithms,
/// marginal_gains[i] is the i-th chosen node's gain and spread_trace is its
/// prefix sum (the estimated spread after each selection); both are derived
/// from integer coverage sums, so the prefix-sum identity is exact up to
/// float rounding. `evaluations` counts per-node marginal-gain
/// computations, the work metric for comparing the plain and
/// dynamic-update variants.
struct SelectionResult {
  SeedSet seeds;
  std::vector<double> marginal_gains;
  std::vector<double> spread_trace;
  std::uint64_t evaluations = 0;
  PhaseTimes elapsed;
};

/// Static greedy: samples one snapshot set up front, then greedily adds the
/// node with the largest mean marginal coverage over that same set in every
/// iteration. Ties break to the lowest NodeId. Selects min(k, n) seeds.
/// k and R must be >= 1.
SelectionResult static_greedy(const WeightedGraph& g, std::size_t k,
                              std::size_t R, std::uint64_t rng_seed);

/// Selection stage only, on a prebuilt (possibly cached) snapshot set.
SelectionResult static_greedy_on(const SnapshotSet& ss, std::size_t k);

/// Accelerated static greedy. Maintains per-snapshot covered-node sets so
/// marginal gains only traverse uncovered nodes, and re-evaluates candidates
/// lazily through a priority queue of stale upper bounds (sound because the
/// fixed-snapshot objective is exactly submodular). Contract: identical
/// seeds and marginal gains to static_greedy for every input; only
/// `evaluations` and timings may differ.
SelectionResult static_greedy_du(const WeightedGraph& g, std::size_t k,
                                 std::size_t R, std::uint64_t rng_seed);
SelectionResult static_greedy_du_on(const SnapshotSet& ss, std::size_t k);

/// Supplies the snapshot set used in a given iteration.
using SnapshotProvider = std::function<SnapshotSet(std::size_t iteration)>;

/// Conventional greedy baseline: every iteration draws a fresh snapshot set
/// (substream keyed by the iteration index) and selects against it.
/// Reproduces the submodularity hazard of per-iteration re-estimation.
SelectionResult conventional_greedy(const WeightedGraph& g, std::size_t k,
                                    std::size_t R_per_iter,
                                    std::uint64_t rng_seed);

/// Conventional greedy over explicit per-iteration snapshot sets.
SelectionResult conventional_greedy_on(std::size_t k,
                                       const SnapshotProvider& provider);

/// Top-k nodes by out-degree, ties to the lowest NodeId. Gains and trace
/// stay empty; score the result afterwards with prefix_spreads.
SelectionResult degree_seeds(const WeightedGraph& g, std::size_t k);

/// k distinct uniform-random nodes, deterministic given rng_seed.
SelectionResult random_seeds(const WeightedGraph& g, std::size_t k,
                             std::uint64_t rng_seed);

/// One sampled counterexample to submodularity or monotonicity of the
/// fixed-set snapshot spread. gain_smaller / gain_larger are the marginal
/// gains of `probe` on top of the smaller set S and the larger set T.
struct SubmodularityViolation {
  std::vector<NodeId> smaller;
  std::vector<NodeId> larger;
  NodeId probe = 0;
  double gain_smaller = 0.0;
  double gain_larger = 0.0;
};

struct SubmodularityReport {
  std::size_t trials = 0;
  std::vector<SubmodularityViolation> violations;
};

/// Samples `trials` random chains S ⊂ T ⊆ V with a probe v ∉ T and checks
/// gain(S,v) >= gain(T,v) >= 0 on the fixed snapshot set, comparing integer
/// coverage sums (zero tolerance). For any fixed set the violation list is
/// empty; that exactness is what licenses the lazy re-evaluation in
/// static_greedy_du. trials must be >= 1; node_count must be >= 2.
SubmodularityReport check_submodularity(const SnapshotSet& ss,
                                        std::size_t trials,
                                        std::uint64_t rng_seed);

}  // namespace spreadlab
