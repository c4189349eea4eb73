#pragma once

#include <cstdint>

#include "spreadlab/graph.hpp"

namespace spreadlab {

// avg_degree below is the average total degree (in + out), the usual
// directed-graph convention: the graph carries about n * avg_degree / 2
// edges, i.e. an average out-degree of avg_degree / 2.

/// Directed Erdős–Rényi graph: every ordered pair (u,v), u != v, becomes an
/// edge independently with probability avg_degree / (2(n-1)). Labels are
/// dense; probabilities stay unassigned.
WeightedGraph erdos_renyi(NodeId n, double avg_degree, std::uint64_t rng_seed);

/// Directed preferential attachment: nodes arrive in id order and each
/// emits up to round(avg_degree / 2) edges to distinct earlier nodes chosen
/// with probability proportional to in-degree + 1.
WeightedGraph preferential_attachment(NodeId n, double avg_degree,
                                      std::uint64_t rng_seed);

}  // namespace spreadlab
