#include "csv.hpp"

#include <charconv>
#include <ostream>

namespace spreadlab::cli {

std::string format_real(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value,
                           std::chars_format::general, 6);
  return std::string(buf, res.ptr);
}

void write_csv(std::span<const ResultRow> rows, std::ostream& out) {
  out << "algorithm,n,edge_count,k,R,seed,iteration,chosen_node,"
         "marginal_gain,cumulative_spread,evaluations,sampling_ms,"
         "selection_ms\n";
  for (const ResultRow& row : rows) {
    out << row.algorithm << ',' << row.n << ',' << row.edge_count << ','
        << row.k << ',' << row.R << ',' << row.seed << ',' << row.iteration
        << ',' << row.chosen_node << ',' << format_real(row.marginal_gain)
        << ',' << format_real(row.cumulative_spread) << ',' << row.evaluations
        << ',' << format_real(row.sampling_ms) << ','
        << format_real(row.selection_ms) << '\n';
  }
}

}  // namespace spreadlab::cli
