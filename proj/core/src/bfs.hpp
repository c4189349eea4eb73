#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "spreadlab/snapshot.hpp"

namespace spreadlab::detail {

/// Epoch-stamped visited marker: begin_pass() invalidates every previous
/// mark in O(1), so BFS scratch can be reused across millions of calls
/// without clearing.
struct VisitScratch {
  std::vector<std::uint32_t> stamp;
  std::uint32_t epoch = 0;
  std::vector<NodeId> stack;

  void prepare(NodeId n) {
    if (stamp.size() < n) stamp.assign(n, 0);
  }

  void begin_pass() {
    if (++epoch == 0) {
      std::fill(stamp.begin(), stamp.end(), 0);
      epoch = 1;
    }
  }

  bool mark(NodeId v) {
    if (stamp[v] == epoch) return false;
    stamp[v] = epoch;
    return true;
  }

  bool seen(NodeId v) const { return stamp[v] == epoch; }
};

/// Nodes reachable from `seeds` in the snapshot (seeds included).
inline std::uint32_t reach_count(const Snapshot& snap,
                                 std::span<const NodeId> seeds,
                                 VisitScratch& scratch) {
  scratch.begin_pass();
  scratch.stack.clear();
  std::uint32_t count = 0;
  for (NodeId s : seeds) {
    if (scratch.mark(s)) {
      ++count;
      scratch.stack.push_back(s);
    }
  }
  while (!scratch.stack.empty()) {
    NodeId u = scratch.stack.back();
    scratch.stack.pop_back();
    for (NodeId v : snap.out_neighbors(u)) {
      if (scratch.mark(v)) {
        ++count;
        scratch.stack.push_back(v);
      }
    }
  }
  return count;
}

/// Word-addressed bit set over node ids.
struct NodeBits {
  std::vector<std::uint64_t> words;

  void assign(NodeId n) { words.assign((static_cast<std::size_t>(n) + 63) / 64, 0); }
  bool test(NodeId v) const { return (words[v >> 6] >> (v & 63)) & 1u; }
  void set(NodeId v) { words[v >> 6] |= std::uint64_t{1} << (v & 63); }
};

/// Nodes reachable from `source` that are not yet covered. Covered nodes
/// are skipped entirely: the covered set is reachability-closed, so
/// anything behind a covered node is already covered.
inline std::uint32_t fresh_reach_count(const Snapshot& snap, NodeId source,
                                       const NodeBits& covered,
                                       VisitScratch& scratch) {
  if (covered.test(source)) return 0;
  scratch.begin_pass();
  scratch.stack.clear();
  scratch.mark(source);
  scratch.stack.push_back(source);
  std::uint32_t count = 1;
  while (!scratch.stack.empty()) {
    NodeId u = scratch.stack.back();
    scratch.stack.pop_back();
    for (NodeId v : snap.out_neighbors(u)) {
      if (!covered.test(v) && scratch.mark(v)) {
        ++count;
        scratch.stack.push_back(v);
      }
    }
  }
  return count;
}

/// Marks everything reachable from `source` as covered; returns the number
/// of newly covered nodes.
inline std::uint32_t absorb_reach(const Snapshot& snap, NodeId source,
                                  NodeBits& covered,
                                  std::vector<NodeId>& stack) {
  if (covered.test(source)) return 0;
  stack.clear();
  covered.set(source);
  stack.push_back(source);
  std::uint32_t count = 1;
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    for (NodeId v : snap.out_neighbors(u)) {
      if (!covered.test(v)) {
        covered.set(v);
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count;
}

}  // namespace spreadlab::detail
