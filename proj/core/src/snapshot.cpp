#include "spreadlab/snapshot.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "spreadlab/errors.hpp"
#include "spreadlab/parallel.hpp"

namespace spreadlab {

namespace {

constexpr std::array<char, 8> kMagic = {'S', 'L', 'S', 'N', 'A', 'P', '0', '1'};

std::size_t mask_word_count(EdgeId edge_count) {
  return (static_cast<std::size_t>(edge_count) + 63) / 64;
}

void write_u64(std::ostream& out, std::uint64_t value) {
  std::array<char, 8> buf;
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((value >> (8 * i)) & 0xff);
  out.write(buf.data(), buf.size());
}

std::uint64_t read_u64(std::istream& in) {
  std::array<char, 8> buf;
  in.read(buf.data(), buf.size());
  if (!in) throw ParseError("truncated snapshot cache");
  std::uint64_t value = 0;
  for (int i = 0; i < 8; ++i) {
    value |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[i])) << (8 * i);
  }
  return value;
}

}  // namespace

void Snapshot::build_adjacency(const WeightedGraph& parent) {
  node_count_ = parent.node_count();
  parent_edge_count_ = parent.edge_count();

  offsets_.assign(node_count_ + 1, 0);
  retained_count_ = 0;
  for (EdgeId e = 0; e < parent_edge_count_; ++e) {
    if (retains(e)) {
      ++offsets_[parent.edge_source(e) + 1];
      ++retained_count_;
    }
  }
  for (NodeId u = 0; u < node_count_; ++u) offsets_[u + 1] += offsets_[u];

  targets_.resize(retained_count_);
  std::vector<EdgeId> cursor(offsets_.begin(), offsets_.end() - 1);
  for (EdgeId e = 0; e < parent_edge_count_; ++e) {
    if (retains(e)) targets_[cursor[parent.edge_source(e)]++] = parent.edge_target(e);
  }
}

Snapshot Snapshot::from_retained_edges(const WeightedGraph& parent,
                                       std::span<const EdgeId> retained) {
  Snapshot snap;
  snap.mask_.assign(mask_word_count(parent.edge_count()), 0);
  for (EdgeId e : retained) {
    if (e >= parent.edge_count()) {
      throw ArgumentError("retained edge id out of range");
    }
    snap.mask_[e >> 6] |= std::uint64_t{1} << (e & 63);
  }
  snap.build_adjacency(parent);
  return snap;
}

Snapshot Snapshot::from_mask_words(const WeightedGraph& parent,
                                   std::vector<std::uint64_t> words) {
  if (words.size() != mask_word_count(parent.edge_count())) {
    throw ArgumentError("mask word count does not match parent edge count");
  }
  Snapshot snap;
  snap.mask_ = std::move(words);
  // Bits past the last edge must be clear.
  if (parent.edge_count() % 64 != 0 && !snap.mask_.empty()) {
    snap.mask_.back() &= (std::uint64_t{1} << (parent.edge_count() % 64)) - 1;
  }
  snap.build_adjacency(parent);
  return snap;
}

Snapshot sample_snapshot(const WeightedGraph& g, RandomStream& stream) {
  if (!g.has_probabilities()) {
    throw ConfigError(
        "graph has unassigned edge probabilities; run assign_probabilities "
        "or supply a default");
  }
  Snapshot snap;
  snap.mask_.assign(mask_word_count(g.edge_count()), 0);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (stream.next_unit() < g.edge_probability(e)) {
      snap.mask_[e >> 6] |= std::uint64_t{1} << (e & 63);
    }
  }
  snap.build_adjacency(g);
  return snap;
}

SnapshotSet SnapshotSet::from_snapshots(const WeightedGraph& parent,
                                        std::vector<Snapshot> snapshots,
                                        std::uint64_t rng_seed) {
  for (const Snapshot& s : snapshots) {
    if (s.node_count() != parent.node_count() ||
        s.parent_edge_count() != parent.edge_count()) {
      throw ArgumentError("snapshot does not belong to this parent graph");
    }
  }
  SnapshotSet ss;
  ss.snapshots_ = std::move(snapshots);
  ss.rng_seed_ = rng_seed;
  ss.parent_hash_ = parent.content_hash();
  ss.node_count_ = parent.node_count();
  ss.parent_edge_count_ = parent.edge_count();
  return ss;
}

SnapshotSet sample_snapshot_set(const WeightedGraph& g, std::size_t R,
                                std::uint64_t rng_seed) {
  if (R < 1) throw ArgumentError("snapshot count R must be >= 1");
  if (!g.has_probabilities()) {
    throw ConfigError(
        "graph has unassigned edge probabilities; run assign_probabilities "
        "or supply a default");
  }

  std::vector<Snapshot> snaps(R);
  parallel_ranges(
      R,
      [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
          RandomStream stream = RandomStream::substream(rng_seed, i);
          snaps[i] = sample_snapshot(g, stream);
        }
      },
      parallel_threshold(g.edge_count()));
  return SnapshotSet::from_snapshots(g, std::move(snaps), rng_seed);
}

void save_snapshot_set(const SnapshotSet& ss, std::ostream& out) {
  out.write(kMagic.data(), kMagic.size());
  write_u64(out, ss.parent_hash());
  write_u64(out, ss.size());
  write_u64(out, ss.rng_seed());
  write_u64(out, ss.parent_edge_count());
  write_u64(out, ss.node_count());

  const std::size_t bytes_per_mask = (ss.parent_edge_count() + 7) / 8;
  std::vector<char> buf(bytes_per_mask);
  for (const Snapshot& snap : ss) {
    std::fill(buf.begin(), buf.end(), 0);
    auto words = snap.mask_words();
    for (std::size_t b = 0; b < bytes_per_mask; ++b) {
      buf[b] = static_cast<char>((words[b / 8] >> (8 * (b % 8))) & 0xff);
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
  if (!out) throw IoError("snapshot cache write failed");
}

void save_snapshot_set(const SnapshotSet& ss, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open snapshot cache for writing: " + path);
  save_snapshot_set(ss, out);
  if (!out) throw IoError("snapshot cache write failed: " + path);
}

SnapshotSet load_snapshot_set(std::istream& in, const WeightedGraph& parent) {
  std::array<char, 8> magic;
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) {
    throw ParseError("not a snapshot cache file (bad magic)");
  }
  const std::uint64_t hash = read_u64(in);
  const std::uint64_t R = read_u64(in);
  const std::uint64_t rng_seed = read_u64(in);
  const std::uint64_t edge_count = read_u64(in);
  const std::uint64_t node_count = read_u64(in);

  if (hash != parent.content_hash() || edge_count != parent.edge_count() ||
      node_count != parent.node_count()) {
    throw ConfigError("snapshot cache does not match the supplied graph");
  }

  const std::size_t bytes_per_mask = (parent.edge_count() + 7) / 8;
  std::vector<Snapshot> snaps;
  snaps.reserve(R);
  std::vector<char> buf(bytes_per_mask);
  for (std::uint64_t i = 0; i < R; ++i) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!in) throw ParseError("truncated snapshot cache");
    std::vector<std::uint64_t> words(mask_word_count(parent.edge_count()), 0);
    for (std::size_t b = 0; b < bytes_per_mask; ++b) {
      words[b / 8] |=
          static_cast<std::uint64_t>(static_cast<unsigned char>(buf[b]))
          << (8 * (b % 8));
    }
    snaps.push_back(Snapshot::from_mask_words(parent, std::move(words)));
  }
  return SnapshotSet::from_snapshots(parent, std::move(snaps), rng_seed);
}

SnapshotSet load_snapshot_set(const std::string& path,
                              const WeightedGraph& parent) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open snapshot cache: " + path);
  return load_snapshot_set(in, parent);
}

}  // namespace spreadlab
