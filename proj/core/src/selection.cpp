#include "spreadlab/selection.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <queue>

#include "bfs.hpp"
#include "spreadlab/errors.hpp"
#include "spreadlab/parallel.hpp"
#include "spreadlab/rng.hpp"

namespace spreadlab {

namespace {

using Clock = std::chrono::steady_clock;

double ms_between(Clock::time_point t0, Clock::time_point t1) {
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void validate_selection_args(std::size_t k, std::size_t R) {
  if (k < 1) throw ArgumentError("seed count k must be >= 1");
  if (R < 1) throw ArgumentError("snapshot count R must be >= 1");
}

// For every candidate v not in S, sums[v] = sum_j |reach_j(S ∪ {v})|.
// Entries for members of S are left at 0.
void candidate_coverage_sums(const SnapshotSet& ss,
                             std::span<const NodeId> seed_members,
                             const std::vector<char>& in_seed,
                             std::vector<std::uint64_t>& sums) {
  const NodeId n = ss.node_count();
  std::fill(sums.begin(), sums.end(), 0);
  parallel_ranges(n, [&](std::size_t lo, std::size_t hi) {
    detail::VisitScratch scratch;
    scratch.prepare(n);
    std::vector<NodeId> probe(seed_members.begin(), seed_members.end());
    probe.push_back(0);
    for (std::size_t v = lo; v < hi; ++v) {
      if (in_seed[v]) continue;
      probe.back() = static_cast<NodeId>(v);
      std::uint64_t total = 0;
      for (const Snapshot& snap : ss) {
        total += detail::reach_count(snap, probe, scratch);
      }
      sums[v] = total;
    }
  }, parallel_threshold(4 * ss.size()));
}

// Argmax over candidates, ties to the lowest node id.
NodeId best_candidate(const std::vector<std::uint64_t>& sums,
                      const std::vector<char>& in_seed) {
  NodeId best = 0;
  std::uint64_t best_sum = 0;
  bool found = false;
  const auto n = static_cast<NodeId>(sums.size());
  for (NodeId v = 0; v < n; ++v) {
    if (in_seed[v]) continue;
    if (!found || sums[v] > best_sum) {
      best = v;
      best_sum = sums[v];
      found = true;
    }
  }
  return best;
}

}  // namespace

SelectionResult static_greedy_on(const SnapshotSet& ss, std::size_t k) {
  if (k < 1) throw ArgumentError("seed count k must be >= 1");
  if (ss.empty()) throw ArgumentError("snapshot set is empty");

  const auto t0 = Clock::now();
  const NodeId n = ss.node_count();
  const auto R = static_cast<double>(ss.size());
  const std::size_t picks = std::min<std::size_t>(k, n);

  SelectionResult result;
  std::vector<char> in_seed(n, 0);
  std::vector<std::uint64_t> sums(n, 0);
  std::uint64_t current_sum = 0;

  for (std::size_t i = 0; i < picks; ++i) {
    candidate_coverage_sums(ss, result.seeds.members(), in_seed, sums);
    result.evaluations += n - i;

    const NodeId chosen = best_candidate(sums, in_seed);
    const std::uint64_t chosen_sum = sums[chosen];
    result.marginal_gains.push_back(
        static_cast<double>(chosen_sum - current_sum) / R);
    result.spread_trace.push_back(static_cast<double>(chosen_sum) / R);
    result.seeds.add(chosen);
    in_seed[chosen] = 1;
    current_sum = chosen_sum;
  }

  result.elapsed.selection_ms = ms_between(t0, Clock::now());
  return result;
}

SelectionResult static_greedy(const WeightedGraph& g, std::size_t k,
                              std::size_t R, std::uint64_t rng_seed) {
  validate_selection_args(k, R);
  const auto t0 = Clock::now();
  SnapshotSet ss = sample_snapshot_set(g, R, rng_seed);
  const auto t1 = Clock::now();
  SelectionResult result = static_greedy_on(ss, k);
  result.elapsed.sampling_ms = ms_between(t0, t1);
  return result;
}

SelectionResult static_greedy_du_on(const SnapshotSet& ss, std::size_t k) {
  if (k < 1) throw ArgumentError("seed count k must be >= 1");
  if (ss.empty()) throw ArgumentError("snapshot set is empty");

  const auto t0 = Clock::now();
  const NodeId n = ss.node_count();
  const auto R = static_cast<double>(ss.size());
  const std::size_t picks = std::min<std::size_t>(k, n);

  SelectionResult result;
  if (picks == 0) {
    result.elapsed.selection_ms = ms_between(t0, Clock::now());
    return result;
  }

  // Covered-node set per snapshot; gains only count uncovered nodes.
  std::vector<detail::NodeBits> covered(ss.size());
  for (auto& bits : covered) bits.assign(n);

  // Lazy queue over exact integer gain sums. Stale entries are upper
  // bounds because the fixed-snapshot objective is submodular; the top is
  // selected only once its gain was recomputed in the current iteration,
  // which reproduces plain greedy's argmax with lowest-id tie-break.
  struct Entry {
    std::uint64_t gain_sum;
    NodeId node;
    std::uint32_t stamp;
  };
  struct Worse {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.gain_sum != b.gain_sum) return a.gain_sum < b.gain_sum;
      return a.node > b.node;
    }
  };

  std::vector<std::uint64_t> initial(n, 0);
  parallel_ranges(n, [&](std::size_t lo, std::size_t hi) {
    detail::VisitScratch scratch;
    scratch.prepare(n);
    for (std::size_t v = lo; v < hi; ++v) {
      std::uint64_t total = 0;
      NodeId node = static_cast<NodeId>(v);
      for (std::size_t j = 0; j < ss.size(); ++j) {
        total += detail::fresh_reach_count(ss[j], node, covered[j], scratch);
      }
      initial[v] = total;
    }
  }, parallel_threshold(4 * ss.size()));
  result.evaluations += n;

  std::vector<Entry> entries;
  entries.reserve(n);
  for (NodeId v = 0; v < n; ++v) entries.push_back({initial[v], v, 0});
  std::priority_queue<Entry, std::vector<Entry>, Worse> queue(
      Worse{}, std::move(entries));

  detail::VisitScratch scratch;
  scratch.prepare(n);
  std::vector<NodeId> absorb_stack;
  std::uint64_t current_sum = 0;

  for (std::uint32_t i = 0; i < picks; ++i) {
    Entry top;
    while (true) {
      top = queue.top();
      queue.pop();
      if (top.stamp == i) break;
      std::uint64_t fresh = 0;
      for (std::size_t j = 0; j < ss.size(); ++j) {
        fresh += detail::fresh_reach_count(ss[j], top.node, covered[j], scratch);
      }
      ++result.evaluations;
      queue.push({fresh, top.node, i});
    }

    current_sum += top.gain_sum;
    result.marginal_gains.push_back(static_cast<double>(top.gain_sum) / R);
    result.spread_trace.push_back(static_cast<double>(current_sum) / R);
    result.seeds.add(top.node);

    if (i + 1 < picks) {
      parallel_ranges(
          ss.size(),
          [&](std::size_t lo, std::size_t hi) {
            std::vector<NodeId> stack;
            for (std::size_t j = lo; j < hi; ++j) {
              detail::absorb_reach(ss[j], top.node, covered[j], stack);
            }
          },
          parallel_threshold(64));
    }
  }

  result.elapsed.selection_ms = ms_between(t0, Clock::now());
  return result;
}

SelectionResult static_greedy_du(const WeightedGraph& g, std::size_t k,
                                 std::size_t R, std::uint64_t rng_seed) {
  validate_selection_args(k, R);
  const auto t0 = Clock::now();
  SnapshotSet ss = sample_snapshot_set(g, R, rng_seed);
  const auto t1 = Clock::now();
  SelectionResult result = static_greedy_du_on(ss, k);
  result.elapsed.sampling_ms = ms_between(t0, t1);
  return result;
}

SelectionResult conventional_greedy_on(std::size_t k,
                                       const SnapshotProvider& provider) {
  if (k < 1) throw ArgumentError("seed count k must be >= 1");

  SelectionResult result;
  double sampling_ms = 0.0;
  const auto t0 = Clock::now();

  std::vector<char> in_seed;
  std::vector<std::uint64_t> sums;
  double cumulative = 0.0;

  for (std::size_t i = 0; i < k; ++i) {
    const auto s0 = Clock::now();
    SnapshotSet ss = provider(i);
    sampling_ms += ms_between(s0, Clock::now());
    if (ss.empty()) throw ArgumentError("snapshot provider returned empty set");

    const NodeId n = ss.node_count();
    if (in_seed.empty()) {
      in_seed.assign(n, 0);
      sums.assign(n, 0);
    } else if (in_seed.size() != n) {
      throw ArgumentError("snapshot provider changed the node universe");
    }
    if (i >= n) break;

    // Both the base coverage and the candidate coverages are estimated on
    // this iteration's fresh snapshot set.
    const std::uint64_t base_sum = coverage_sum(ss, result.seeds);
    candidate_coverage_sums(ss, result.seeds.members(), in_seed, sums);
    result.evaluations += n - i;

    const NodeId chosen = best_candidate(sums, in_seed);
    const double gain =
        static_cast<double>(sums[chosen] - base_sum) / static_cast<double>(ss.size());
    cumulative += gain;
    result.marginal_gains.push_back(gain);
    result.spread_trace.push_back(cumulative);
    result.seeds.add(chosen);
    in_seed[chosen] = 1;
  }

  result.elapsed.sampling_ms = sampling_ms;
  result.elapsed.selection_ms = ms_between(t0, Clock::now()) - sampling_ms;
  return result;
}

SelectionResult conventional_greedy(const WeightedGraph& g, std::size_t k,
                                    std::size_t R_per_iter,
                                    std::uint64_t rng_seed) {
  validate_selection_args(k, R_per_iter);
  return conventional_greedy_on(k, [&](std::size_t iteration) {
    return sample_snapshot_set(g, R_per_iter, derive_seed(rng_seed, iteration));
  });
}

SelectionResult degree_seeds(const WeightedGraph& g, std::size_t k) {
  if (k < 1) throw ArgumentError("seed count k must be >= 1");
  const auto t0 = Clock::now();

  std::vector<NodeId> order(g.node_count());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    std::uint32_t da = g.out_degree(a);
    std::uint32_t db = g.out_degree(b);
    if (da != db) return da > db;
    return a < b;
  });

  SelectionResult result;
  const std::size_t picks = std::min<std::size_t>(k, g.node_count());
  for (std::size_t i = 0; i < picks; ++i) result.seeds.add(order[i]);
  result.elapsed.selection_ms = ms_between(t0, Clock::now());
  return result;
}

SelectionResult random_seeds(const WeightedGraph& g, std::size_t k,
                             std::uint64_t rng_seed) {
  if (k < 1) throw ArgumentError("seed count k must be >= 1");
  const auto t0 = Clock::now();

  const NodeId n = g.node_count();
  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), 0);

  RandomStream stream = RandomStream::substream(rng_seed, 0x72616e646f6dULL);
  const std::size_t picks = std::min<std::size_t>(k, n);
  SelectionResult result;
  for (std::size_t i = 0; i < picks; ++i) {
    std::size_t j = i + stream.next_below(static_cast<std::uint32_t>(n - i));
    std::swap(perm[i], perm[j]);
    result.seeds.add(perm[i]);
  }
  result.elapsed.selection_ms = ms_between(t0, Clock::now());
  return result;
}

SubmodularityReport check_submodularity(const SnapshotSet& ss,
                                        std::size_t trials,
                                        std::uint64_t rng_seed) {
  if (trials < 1) throw ArgumentError("trials must be >= 1");
  if (ss.empty()) throw ArgumentError("snapshot set is empty");
  const NodeId n = ss.node_count();
  if (n < 2) {
    throw ArgumentError("submodularity sampling needs at least 2 nodes");
  }

  SubmodularityReport report;
  report.trials = trials;
  const auto R = static_cast<double>(ss.size());

  std::vector<NodeId> pool(n);
  for (std::size_t t = 0; t < trials; ++t) {
    RandomStream stream = RandomStream::substream(rng_seed, t);

    const std::uint32_t t_size = 1 + stream.next_below(n - 1);
    const std::uint32_t s_size = stream.next_below(t_size);

    // Partial Fisher-Yates: the first t_size entries become T (random
    // order), the next entry becomes the probe.
    std::iota(pool.begin(), pool.end(), 0);
    for (std::uint32_t i = 0; i <= t_size; ++i) {
      std::uint32_t j = i + stream.next_below(static_cast<std::uint32_t>(n - i));
      std::swap(pool[i], pool[j]);
    }
    const NodeId probe = pool[t_size];

    SeedSet larger;
    for (std::uint32_t i = 0; i < t_size; ++i) larger.add(pool[i]);
    SeedSet smaller;
    for (std::uint32_t i = 0; i < s_size; ++i) smaller.add(pool[i]);

    SeedSet larger_probe = larger;
    larger_probe.add(probe);
    SeedSet smaller_probe = smaller;
    smaller_probe.add(probe);

    const auto cov_s = static_cast<std::int64_t>(coverage_sum(ss, smaller));
    const auto cov_sv = static_cast<std::int64_t>(coverage_sum(ss, smaller_probe));
    const auto cov_t = static_cast<std::int64_t>(coverage_sum(ss, larger));
    const auto cov_tv = static_cast<std::int64_t>(coverage_sum(ss, larger_probe));

    const std::int64_t gain_s = cov_sv - cov_s;
    const std::int64_t gain_t = cov_tv - cov_t;
    if (gain_s < gain_t || gain_s < 0 || gain_t < 0) {
      SubmodularityViolation violation;
      violation.smaller.assign(smaller.members().begin(), smaller.members().end());
      violation.larger.assign(larger.members().begin(), larger.members().end());
      violation.probe = probe;
      violation.gain_smaller = static_cast<double>(gain_s) / R;
      violation.gain_larger = static_cast<double>(gain_t) / R;
      report.violations.push_back(std::move(violation));
    }
  }
  return report;
}

}  // namespace spreadlab
