#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "spreadlab/graph.hpp"
#include "spreadlab/rng.hpp"

namespace spreadlab {

/// One Monte Carlo snapshot: a subgraph of the parent graph keeping each
/// edge independently with its probability. Holds the retained-edge bitmask
/// (bit e = parent edge e kept) plus a materialized forward adjacency for
/// fast reachability. Immutable.
class Snapshot {
public:
  Snapshot() = default;

  /// Builds a snapshot from an explicit retained-edge set.
  static Snapshot from_retained_edges(const WeightedGraph& parent,
                                      std::span<const EdgeId> retained);

  /// Builds a snapshot from mask words (bit e set = edge e retained).
  static Snapshot from_mask_words(const WeightedGraph& parent,
                                  std::vector<std::uint64_t> words);

  NodeId node_count() const { return node_count_; }
  EdgeId parent_edge_count() const { return parent_edge_count_; }
  EdgeId retained_edge_count() const { return retained_count_; }

  bool retains(EdgeId e) const {
    return (mask_[e >> 6] >> (e & 63)) & 1u;
  }

  std::span<const NodeId> out_neighbors(NodeId u) const {
    return {targets_.data() + offsets_[u], targets_.data() + offsets_[u + 1]};
  }

  std::span<const std::uint64_t> mask_words() const { return mask_; }

private:
  friend Snapshot sample_snapshot(const WeightedGraph&, RandomStream&);

  void build_adjacency(const WeightedGraph& parent);

  NodeId node_count_ = 0;
  EdgeId parent_edge_count_ = 0;
  EdgeId retained_count_ = 0;
  std::vector<std::uint64_t> mask_;
  std::vector<EdgeId> offsets_;  // size node_count_ + 1
  std::vector<NodeId> targets_;  // retained edges only
};

/// The static set of R snapshots over one parent graph. Fully determined by
/// (parent graph, rng_seed, R); regeneration is bit-identical. Immutable
/// and safe for shared reads.
class SnapshotSet {
public:
  SnapshotSet() = default;

  static SnapshotSet from_snapshots(const WeightedGraph& parent,
                                    std::vector<Snapshot> snapshots,
                                    std::uint64_t rng_seed = 0);

  std::size_t size() const { return snapshots_.size(); }
  bool empty() const { return snapshots_.empty(); }
  const Snapshot& operator[](std::size_t i) const { return snapshots_[i]; }

  auto begin() const { return snapshots_.begin(); }
  auto end() const { return snapshots_.end(); }

  NodeId node_count() const { return node_count_; }
  EdgeId parent_edge_count() const { return parent_edge_count_; }
  std::uint64_t rng_seed() const { return rng_seed_; }
  std::uint64_t parent_hash() const { return parent_hash_; }

private:
  std::vector<Snapshot> snapshots_;
  std::uint64_t rng_seed_ = 0;
  std::uint64_t parent_hash_ = 0;
  NodeId node_count_ = 0;
  EdgeId parent_edge_count_ = 0;
};

/// Samples one snapshot: edge e is retained iff draw < p(e). Draws are
/// consumed in edge-index order. Throws ConfigError if any edge probability
/// is unassigned.
Snapshot sample_snapshot(const WeightedGraph& g, RandomStream& stream);

/// Samples R snapshots; snapshot i comes from substream (rng_seed, i), so
/// the result is independent of generation order and worker count.
/// R must be >= 1.
SnapshotSet sample_snapshot_set(const WeightedGraph& g, std::size_t R,
                                std::uint64_t rng_seed);

// --- snapshot cache file --------------------------------------------------
//
// Binary, little-endian: an 8-byte magic, the parent graph's content hash,
// R, rng_seed, the parent edge and node counts, then R edge bitmasks of
// ceil(m/8) bytes each, bit order little-endian by edge index. Loading
// verifies the content hash against the supplied parent graph.

void save_snapshot_set(const SnapshotSet& ss, std::ostream& out);
void save_snapshot_set(const SnapshotSet& ss, const std::string& path);
SnapshotSet load_snapshot_set(std::istream& in, const WeightedGraph& parent);
SnapshotSet load_snapshot_set(const std::string& path,
                              const WeightedGraph& parent);

}  // namespace spreadlab
