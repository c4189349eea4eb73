#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

namespace spreadlab {

/// Dense node index, contiguous in [0, node_count).
using NodeId = std::uint32_t;

/// Edge index into the graph's CSR arrays.
using EdgeId = std::uint32_t;

/// External node label as it appears in edge-list files.
using Label = std::uint64_t;

/// Sentinel for an edge whose activation probability has not been assigned.
constexpr double kProbabilityUnset = -1.0;

struct LabeledEdge {
  Label u = 0;
  Label v = 0;
  double p = kProbabilityUnset;
};

/// Ingestion side effects worth reporting: dropped duplicates (first
/// occurrence wins) and dropped self-loops.
struct IngestStats {
  std::size_t duplicate_edges = 0;
  std::size_t self_loops = 0;
};

/// Immutable directed graph with one activation probability per edge.
///
/// External labels are remapped to dense NodeIds in order of first
/// appearance; the mapping is retained for output. Edges live in CSR form:
/// the edges of node u occupy the EdgeId range [out_begin(u), out_end(u)),
/// preserving input order within each source. After construction the graph
/// never changes, so it is safe to share across threads.
class WeightedGraph {
public:
  WeightedGraph() = default;

  /// Canonical constructor. Remaps labels, drops self-loops, keeps the
  /// first of any duplicate directed edge. Edges lacking a probability
  /// receive `default_p` when present, else stay unassigned.
  static WeightedGraph from_edges(std::span<const LabeledEdge> edges,
                                  std::optional<double> default_p = {});

  /// Construction for graphs whose labels already are 0..node_count-1.
  /// Permits isolated nodes. Endpoints >= node_count are an error.
  static WeightedGraph from_dense_edges(NodeId node_count,
                                        std::span<const LabeledEdge> edges,
                                        std::optional<double> default_p = {});

  NodeId node_count() const { return node_count_; }
  EdgeId edge_count() const { return static_cast<EdgeId>(targets_.size()); }

  EdgeId out_begin(NodeId u) const { return out_offsets_[u]; }
  EdgeId out_end(NodeId u) const { return out_offsets_[u + 1]; }
  std::uint32_t out_degree(NodeId u) const { return out_end(u) - out_begin(u); }

  NodeId edge_source(EdgeId e) const { return sources_[e]; }
  NodeId edge_target(EdgeId e) const { return targets_[e]; }

  /// Probability of edge e, or kProbabilityUnset (< 0) when unassigned.
  double edge_probability(EdgeId e) const { return probabilities_[e]; }

  std::span<const NodeId> out_neighbors(NodeId u) const {
    return {targets_.data() + out_begin(u), targets_.data() + out_end(u)};
  }

  /// Edge ids in ingestion order. Serialization emits edges in this order
  /// so that re-parsing reproduces the identical graph, label map included.
  std::span<const EdgeId> ingestion_order() const { return ingestion_order_; }

  /// True when every edge has an assigned probability.
  bool has_probabilities() const;

  std::vector<std::uint32_t> in_degrees() const;

  Label label_of(NodeId v) const { return labels_[v]; }
  std::optional<NodeId> node_of(Label label) const;

  const IngestStats& ingest_stats() const { return stats_; }

  /// Structural content hash over node count, topology and probabilities
  /// (labels excluded). Pairs snapshot caches with their parent graph.
  std::uint64_t content_hash() const;

  bool operator==(const WeightedGraph& other) const;

private:
  friend WeightedGraph with_probabilities(const WeightedGraph& g,
                                          std::vector<double> probabilities);

  NodeId node_count_ = 0;
  std::vector<EdgeId> out_offsets_ = {0};  // size node_count_ + 1
  std::vector<NodeId> sources_;
  std::vector<NodeId> targets_;
  std::vector<double> probabilities_;
  std::vector<EdgeId> ingestion_order_;
  std::vector<Label> labels_;  // NodeId -> external label
  std::unordered_map<Label, NodeId> label_to_node_;
  IngestStats stats_;
};

// --- probability models -----------------------------------------------

/// Every edge gets the same probability p.
struct UniformProbability {
  double p = 0.0;
};

/// p(u,v) = 1 / in-degree(v). Well-defined for every edge: the edge itself
/// contributes to its target's in-degree.
struct WeightedCascade {};

/// Each edge gets one value drawn uniformly from `values`.
struct Trivalency {
  std::vector<double> values = {0.1, 0.01, 0.001};
};

using ProbabilityModel =
    std::variant<UniformProbability, WeightedCascade, Trivalency>;

/// Returns a copy of g with every edge probability set by the model. The
/// edge set is untouched. Uniform and weighted-cascade ignore rng_seed;
/// trivalency draws deterministically from a stream derived from it.
WeightedGraph assign_probabilities(const WeightedGraph& g,
                                   const ProbabilityModel& model,
                                   std::uint64_t rng_seed = 0);

// --- edge-list text format ----------------------------------------------
//
// UTF-8 text, newline-terminated records. Lines whose first non-blank
// character is '#' are comments; blank lines are skipped. Each record is
// "u v" or "u v p", whitespace-separated, with u and v non-negative
// integer labels and p in [0,1].

WeightedGraph parse_edge_list(std::istream& in,
                              std::optional<double> default_p = {});
WeightedGraph load_edge_list(const std::string& path,
                             std::optional<double> default_p = {});

/// Writes records grouped by source node, one edge per line, with a `p`
/// column when the edge has an assigned probability. Probabilities print
/// with shortest round-trip precision, so parse(write(g)) == g.
void write_edge_list(const WeightedGraph& g, std::ostream& out);
void save_edge_list(const WeightedGraph& g, const std::string& path);

}  // namespace spreadlab
