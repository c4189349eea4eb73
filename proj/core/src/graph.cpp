#include "spreadlab/graph.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "spreadlab/errors.hpp"
#include "spreadlab/rng.hpp"

namespace spreadlab {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_mix(std::uint64_t& h, std::uint64_t value) {
  for (int i = 0; i < 8; ++i) {
    h ^= (value >> (8 * i)) & 0xffu;
    h *= kFnvPrime;
  }
}

bool probability_set(double p) { return p >= 0.0; }

void validate_probability(double p, std::size_t line) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("edge probability must be in [0,1]", line);
  }
}

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

}  // namespace

WeightedGraph WeightedGraph::from_edges(std::span<const LabeledEdge> edges,
                                        std::optional<double> default_p) {
  if (default_p) validate_probability(*default_p, 0);

  WeightedGraph g;
  std::vector<LabeledEdge> kept;
  kept.reserve(edges.size());

  // Label registration happens only for retained edges, so ingestion stays
  // idempotent under write_edge_list (dropped edges leave no trace).
  std::unordered_map<std::uint64_t, char> seen;
  seen.reserve(edges.size() * 2);

  auto intern = [&g](Label label) -> NodeId {
    auto [it, inserted] =
        g.label_to_node_.try_emplace(label, static_cast<NodeId>(g.labels_.size()));
    if (inserted) g.labels_.push_back(label);
    return it->second;
  };

  std::vector<std::pair<NodeId, NodeId>> endpoints;
  endpoints.reserve(edges.size());

  for (const LabeledEdge& e : edges) {
    if (e.u == e.v) {
      ++g.stats_.self_loops;
      continue;
    }
    if (probability_set(e.p)) validate_probability(e.p, 0);
    NodeId u = intern(e.u);
    NodeId v = intern(e.v);
    std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | v;
    if (!seen.try_emplace(key, 0).second) {
      ++g.stats_.duplicate_edges;
      continue;
    }
    kept.push_back(e);
    endpoints.emplace_back(u, v);
  }

  g.node_count_ = static_cast<NodeId>(g.labels_.size());

  // Counting sort by source keeps within-source input order.
  g.out_offsets_.assign(g.node_count_ + 1, 0);
  for (auto [u, v] : endpoints) ++g.out_offsets_[u + 1];
  for (NodeId u = 0; u < g.node_count_; ++u) {
    g.out_offsets_[u + 1] += g.out_offsets_[u];
  }

  const auto m = static_cast<EdgeId>(kept.size());
  g.sources_.resize(m);
  g.targets_.resize(m);
  g.probabilities_.resize(m);
  std::vector<EdgeId> cursor(g.out_offsets_.begin(), g.out_offsets_.end() - 1);
  g.ingestion_order_.reserve(m);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    auto [u, v] = endpoints[i];
    EdgeId slot = cursor[u]++;
    g.ingestion_order_.push_back(slot);
    g.sources_[slot] = u;
    g.targets_[slot] = v;
    double p = kept[i].p;
    if (!probability_set(p) && default_p) p = *default_p;
    g.probabilities_[slot] = probability_set(p) ? p : kProbabilityUnset;
  }
  return g;
}

WeightedGraph WeightedGraph::from_dense_edges(NodeId node_count,
                                              std::span<const LabeledEdge> edges,
                                              std::optional<double> default_p) {
  if (default_p) validate_probability(*default_p, 0);
  for (const LabeledEdge& e : edges) {
    if (e.u >= node_count || e.v >= node_count) {
      throw ArgumentError("edge endpoint out of range for dense graph");
    }
  }

  // Identity label mapping; isolated nodes are legal here.
  WeightedGraph out;
  out.node_count_ = node_count;
  out.labels_.resize(node_count);
  out.label_to_node_.reserve(node_count * 2);
  for (NodeId v = 0; v < node_count; ++v) {
    out.labels_[v] = v;
    out.label_to_node_.emplace(v, v);
  }

  std::unordered_map<std::uint64_t, char> seen;
  seen.reserve(edges.size() * 2);
  std::vector<LabeledEdge> kept;
  kept.reserve(edges.size());
  for (const LabeledEdge& e : edges) {
    if (e.u == e.v) {
      ++out.stats_.self_loops;
      continue;
    }
    if (probability_set(e.p)) validate_probability(e.p, 0);
    std::uint64_t key = (e.u << 32) | e.v;
    if (!seen.try_emplace(key, 0).second) {
      ++out.stats_.duplicate_edges;
      continue;
    }
    kept.push_back(e);
  }

  out.out_offsets_.assign(node_count + 1, 0);
  for (const LabeledEdge& e : kept) ++out.out_offsets_[e.u + 1];
  for (NodeId u = 0; u < node_count; ++u) {
    out.out_offsets_[u + 1] += out.out_offsets_[u];
  }
  const auto m = static_cast<EdgeId>(kept.size());
  out.sources_.resize(m);
  out.targets_.resize(m);
  out.probabilities_.resize(m);
  std::vector<EdgeId> cursor(out.out_offsets_.begin(), out.out_offsets_.end() - 1);
  out.ingestion_order_.reserve(m);
  for (const LabeledEdge& e : kept) {
    EdgeId slot = cursor[e.u]++;
    out.ingestion_order_.push_back(slot);
    out.sources_[slot] = static_cast<NodeId>(e.u);
    out.targets_[slot] = static_cast<NodeId>(e.v);
    double p = probability_set(e.p) ? e.p
               : default_p          ? *default_p
                                    : kProbabilityUnset;
    out.probabilities_[slot] = p;
  }
  return out;
}

bool WeightedGraph::has_probabilities() const {
  return std::all_of(probabilities_.begin(), probabilities_.end(),
                     probability_set);
}

std::vector<std::uint32_t> WeightedGraph::in_degrees() const {
  std::vector<std::uint32_t> deg(node_count_, 0);
  for (NodeId t : targets_) ++deg[t];
  return deg;
}

std::optional<NodeId> WeightedGraph::node_of(Label label) const {
  auto it = label_to_node_.find(label);
  if (it == label_to_node_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t WeightedGraph::content_hash() const {
  std::uint64_t h = kFnvOffset;
  fnv_mix(h, node_count_);
  fnv_mix(h, targets_.size());
  for (EdgeId off : out_offsets_) fnv_mix(h, off);
  for (NodeId t : targets_) fnv_mix(h, t);
  for (double p : probabilities_) fnv_mix(h, std::bit_cast<std::uint64_t>(p));
  return h;
}

bool WeightedGraph::operator==(const WeightedGraph& other) const {
  return node_count_ == other.node_count_ &&
         out_offsets_ == other.out_offsets_ && targets_ == other.targets_ &&
         probabilities_ == other.probabilities_ && labels_ == other.labels_ &&
         ingestion_order_ == other.ingestion_order_;
}

WeightedGraph with_probabilities(const WeightedGraph& g,
                                 std::vector<double> probabilities) {
  WeightedGraph out = g;
  out.probabilities_ = std::move(probabilities);
  return out;
}

WeightedGraph assign_probabilities(const WeightedGraph& g,
                                   const ProbabilityModel& model,
                                   std::uint64_t rng_seed) {
  std::vector<double> probs(g.edge_count());

  if (const auto* uniform = std::get_if<UniformProbability>(&model)) {
    validate_probability(uniform->p, 0);
    std::fill(probs.begin(), probs.end(), uniform->p);
  } else if (std::holds_alternative<WeightedCascade>(model)) {
    auto indeg = g.in_degrees();
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      probs[e] = 1.0 / indeg[g.edge_target(e)];
    }
  } else {
    const auto& tri = std::get<Trivalency>(model);
    if (tri.values.empty()) {
      throw ArgumentError("trivalency value set must be nonempty");
    }
    for (double v : tri.values) validate_probability(v, 0);
    RandomStream stream = RandomStream::substream(rng_seed, 0x7269766174ULL);
    const auto n_values = static_cast<std::uint32_t>(tri.values.size());
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      probs[e] = tri.values[stream.next_below(n_values)];
    }
  }
  return with_probabilities(g, std::move(probs));
}

WeightedGraph parse_edge_list(std::istream& in,
                              std::optional<double> default_p) {
  std::vector<LabeledEdge> edges;
  std::string line;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv(line);
    // Tokenize on blanks; skip blank and comment lines.
    std::size_t pos = sv.find_first_not_of(" \t\r");
    if (pos == std::string_view::npos || sv[pos] == '#') continue;

    std::string_view tokens[4];
    int count = 0;
    while (pos != std::string_view::npos) {
      std::size_t end = sv.find_first_of(" \t\r", pos);
      std::string_view tok = (end == std::string_view::npos)
                                 ? sv.substr(pos)
                                 : sv.substr(pos, end - pos);
      if (count < 4) tokens[count] = tok;
      ++count;
      pos = sv.find_first_not_of(" \t\r", end);
    }
    if (count < 2 || count > 3) {
      throw ParseError("expected \"u v\" or \"u v p\", got " +
                           std::to_string(count) + " fields",
                       line_no);
    }

    LabeledEdge e;
    auto parse_label = [&](std::string_view tok, const char* what) -> Label {
      Label value = 0;
      auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
      if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
        throw ParseError(std::string(what) + " is not a non-negative integer: \"" +
                             std::string(tok) + "\"",
                         line_no);
      }
      return value;
    };
    e.u = parse_label(tokens[0], "source");
    e.v = parse_label(tokens[1], "target");
    if (count == 3) {
      double p = 0.0;
      auto tok = tokens[2];
      auto res = std::from_chars(tok.data(), tok.data() + tok.size(), p);
      if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
        throw ParseError("probability is not numeric: \"" + std::string(tok) +
                             "\"",
                         line_no);
      }
      validate_probability(p, line_no);
      e.p = p;
    }
    edges.push_back(e);
  }
  return WeightedGraph::from_edges(edges, default_p);
}

WeightedGraph load_edge_list(const std::string& path,
                             std::optional<double> default_p) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open graph file: " + path);
  return parse_edge_list(in, default_p);
}

void write_edge_list(const WeightedGraph& g, std::ostream& out) {
  for (EdgeId e : g.ingestion_order()) {
    out << g.label_of(g.edge_source(e)) << ' '
        << g.label_of(g.edge_target(e));
    double p = g.edge_probability(e);
    if (p >= 0.0) out << ' ' << format_double(p);
    out << '\n';
  }
}

void save_edge_list(const WeightedGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output file: " + path);
  write_edge_list(g, out);
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace spreadlab
