#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "spreadlab/graph.hpp"

namespace spreadlab::cli {

/// One CSV record per selection iteration. Run-level fields (n, edge_count,
/// seed, evaluations, timings) repeat on every row of a run.
struct ResultRow {
  std::string algorithm;
  std::uint64_t n = 0;
  std::uint64_t edge_count = 0;
  std::uint64_t k = 0;
  std::uint64_t R = 0;
  std::uint64_t seed = 0;
  std::uint64_t iteration = 0;  // 1-based
  Label chosen_node = 0;        // external label
  double marginal_gain = 0.0;
  double cumulative_spread = 0.0;
  std::uint64_t evaluations = 0;
  double sampling_ms = 0.0;
  double selection_ms = 0.0;
};

/// Shortest representation with up to 6 significant digits, '.' decimal
/// separator, no locale dependence.
std::string format_real(double value);

/// RFC-4180-style CSV with '\n' records; header always present.
void write_csv(std::span<const ResultRow> rows, std::ostream& out);

}  // namespace spreadlab::cli
