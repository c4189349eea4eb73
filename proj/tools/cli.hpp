#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace spreadlab::cli {

enum class Command { gen, sample, select, evaluate, bench, audit };

/// Fully determines a run: no hidden state, no clock-based seeds. When the
/// user omits --seed one is drawn from the OS and echoed on stderr, so the
/// run stays reproducible after the fact.
struct RunConfig {
  Command command = Command::select;
  std::string graph_path;
  std::string algorithm = "static";
  std::uint64_t k = 1;
  std::uint64_t R = 100;
  std::optional<double> uniform_p;
  std::optional<std::string> prob_model;
  std::uint64_t seed = 0;
  std::string output_path;     // empty = stdout
  std::string snapshots_path;  // empty = no cache
  std::uint64_t eval_R = 10000;
  std::string seeds_list;      // evaluate: comma-separated labels
  std::string seeds_csv;       // evaluate: CSV produced by `select`
  std::uint64_t trials = 1000;
  // gen only
  std::uint64_t gen_n = 0;
  double gen_avg_degree = 0.0;
  std::string gen_model = "er";
};

/// Exit codes: 0 success, 2 usage error, 3 runtime error.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace spreadlab::cli
