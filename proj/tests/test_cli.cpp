#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "csv.hpp"
#include "spreadlab/snapshot.hpp"
#include "spreadlab/spread.hpp"
#include "test_util.hpp"

using testutil::CliResult;
using testutil::TempDir;
using testutil::run_cli;

namespace {

const std::string kChain = "0 1\n1 2\n";

std::vector<std::string> csv_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> fields_of(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream stream(line);
  std::string field;
  while (std::getline(stream, field, ',')) fields.push_back(field);
  return fields;
}

// Timing columns (the last two) carry measured wall time; drop them when
// comparing runs that may legitimately differ in speed.
std::string strip_timing(const std::string& csv) {
  std::string out;
  for (const auto& line : csv_lines(csv)) {
    auto fields = fields_of(line);
    if (fields.size() >= 2) fields.resize(fields.size() - 2);
    for (std::size_t i = 0; i < fields.size(); ++i) {
      out += fields[i];
      if (i + 1 < fields.size()) out += ',';
    }
    out += '\n';
  }
  return out;
}

}  // namespace

TEST_CASE("write_csv formatting") {
  using spreadlab::cli::ResultRow;
  using spreadlab::cli::write_csv;

  std::ostringstream empty;
  write_csv({}, empty);
  CHECK(empty.str() ==
        "algorithm,n,edge_count,k,R,seed,iteration,chosen_node,marginal_gain,"
        "cumulative_spread,evaluations,sampling_ms,selection_ms\n");

  ResultRow row;
  row.algorithm = "static";
  row.n = 3;
  row.edge_count = 2;
  row.k = 1;
  row.R = 10;
  row.seed = 1;
  row.iteration = 1;
  row.chosen_node = 0;
  row.marginal_gain = 3.0;
  row.cumulative_spread = 2.4375;
  row.evaluations = 3;
  row.sampling_ms = 0.0;
  row.selection_ms = 12.0;

  std::ostringstream one;
  write_csv(std::vector<ResultRow>{row}, one);
  auto lines = csv_lines(one.str());
  REQUIRE(lines.size() == 2);
  CHECK(fields_of(lines[1]).size() == 13);
  // trailing zeros trimmed, 6 significant digits
  CHECK(lines[1] == "static,3,2,1,10,1,1,0,3,2.4375,3,0,12");
}

TEST_CASE("cli: select on a certain chain emits the expected row") {
  TempDir dir;
  testutil::write_file(dir.file("chain.txt"), kChain);

  CliResult res = run_cli("select --graph " + dir.file("chain.txt").string() +
                              " --p 1.0 --algo static --k 1 --R 10 --seed 1",
                          dir);
  CHECK(res.exit_code == 0);
  auto lines = csv_lines(res.out);
  REQUIRE(lines.size() == 2);
  auto fields = fields_of(lines[1]);
  REQUIRE(fields.size() == 13);
  CHECK(fields[0] == "static");
  CHECK(fields[1] == "3");   // n
  CHECK(fields[2] == "2");   // edge_count
  CHECK(fields[3] == "1");   // k
  CHECK(fields[4] == "10");  // R
  CHECK(fields[5] == "1");   // seed
  CHECK(fields[6] == "1");   // iteration
  CHECK(fields[7] == "0");   // chosen_node
  CHECK(fields[8] == "3");   // marginal_gain
  CHECK(fields[9] == "3");   // cumulative_spread
}

TEST_CASE("cli: identical invocations produce identical bytes") {
  TempDir dir;
  testutil::write_file(dir.file("chain.txt"), kChain);
  const std::string cmd = "select --graph " + dir.file("chain.txt").string() +
                          " --p 1.0 --algo static --k 1 --R 10 --seed 1";
  CliResult a = run_cli(cmd, dir);
  CliResult b = run_cli(cmd, dir);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("cli: SPREADLAB_THREADS never changes the selection output") {
  TempDir dir;
  CliResult gen = run_cli("gen --n 120 --avg-degree 4 --seed 3 --out " +
                              dir.file("g.txt").string(),
                          dir);
  REQUIRE(gen.exit_code == 0);

  const std::string cmd = "select --graph " + dir.file("g.txt").string() +
                          " --p 0.2 --algo static-du --k 4 --R 60 --seed 9";
  CliResult narrow = run_cli(cmd, dir, "SPREADLAB_THREADS=1");
  CliResult wide = run_cli(cmd, dir, "SPREADLAB_THREADS=8");
  CHECK(narrow.exit_code == 0);
  CHECK(wide.exit_code == 0);
  CHECK(strip_timing(narrow.out) == strip_timing(wide.out));
}

TEST_CASE("cli: usage errors exit 2 and write no output file") {
  TempDir dir;
  testutil::write_file(dir.file("chain.txt"), kChain);
  const std::string out_file = dir.file("out.csv").string();

  CliResult bad_k = run_cli("select --graph " + dir.file("chain.txt").string() +
                                " --p 1.0 --algo static --k 0 --R 10 --seed 1 "
                                "--out " + out_file,
                            dir);
  CHECK(bad_k.exit_code == 2);
  CHECK_FALSE(std::filesystem::exists(out_file));

  CHECK(run_cli("select --graph x.txt --k 1 --R 1 --frobnicate", dir).exit_code == 2);
  CHECK(run_cli("frobnicate", dir).exit_code == 2);
  CHECK(run_cli("select --k 1 --R 1", dir).exit_code == 2);  // --graph missing
  CHECK(run_cli("select --graph " + dir.file("chain.txt").string() +
                    " --k 1 --R 1 --prob-model uniform",
                dir)
            .exit_code == 2);  // uniform without --p
}

TEST_CASE("cli: missing graph file exits 3 and names the path") {
  TempDir dir;
  CliResult res = run_cli(
      "select --graph " + dir.file("nope.txt").string() +
          " --p 0.5 --algo static --k 1 --R 5 --seed 1",
      dir);
  CHECK(res.exit_code == 3);
  CHECK(res.err.find("nope.txt") != std::string::npos);
}

TEST_CASE("cli: graph without probabilities exits 3") {
  TempDir dir;
  testutil::write_file(dir.file("chain.txt"), kChain);
  CliResult res = run_cli("select --graph " + dir.file("chain.txt").string() +
                              " --algo static --k 1 --R 5 --seed 1",
                          dir);
  CHECK(res.exit_code == 3);
}

TEST_CASE("cli: gen -> select -> evaluate pipeline") {
  TempDir dir;
  CliResult gen = run_cli("gen --n 60 --avg-degree 4 --model er --seed 7 "
                          "--p 1.0 --out " + dir.file("g.txt").string(),
                          dir);
  REQUIRE(gen.exit_code == 0);

  CliResult sel = run_cli("select --graph " + dir.file("g.txt").string() +
                              " --algo static --k 3 --R 50 --seed 2 --out " +
                              dir.file("sel.csv").string(),
                          dir);
  REQUIRE(sel.exit_code == 0);
  auto lines = csv_lines(testutil::read_file(dir.file("sel.csv")));
  REQUIRE(lines.size() == 4);

  // p = 1 makes the spread deterministic, so an independent evaluation
  // reproduces the final cumulative spread exactly.
  const std::string last_spread = fields_of(lines[3])[9];
  CliResult eval = run_cli("evaluate --graph " + dir.file("g.txt").string() +
                               " --p 1.0 --seeds-csv " +
                               dir.file("sel.csv").string() +
                               " --eval-R 100 --seed 5",
                           dir);
  REQUIRE(eval.exit_code == 0);
  CHECK(eval.out == last_spread + "\n");
}

TEST_CASE("cli: evaluate reproduces select's final spread within 4 SE") {
  TempDir dir;
  CliResult gen = run_cli("gen --n 80 --avg-degree 6 --seed 11 --out " +
                              dir.file("g.txt").string(),
                          dir);
  REQUIRE(gen.exit_code == 0);

  CliResult sel = run_cli("select --graph " + dir.file("g.txt").string() +
                              " --p 0.3 --algo static --k 4 --R 400 --seed 3 "
                              "--out " + dir.file("sel.csv").string(),
                          dir);
  REQUIRE(sel.exit_code == 0);
  auto lines = csv_lines(testutil::read_file(dir.file("sel.csv")));
  REQUIRE(lines.size() == 5);
  const double last_spread = std::stod(fields_of(lines[4])[9]);

  CliResult eval = run_cli("evaluate --graph " + dir.file("g.txt").string() +
                               " --p 0.3 --seeds-csv " +
                               dir.file("sel.csv").string() +
                               " --eval-R 4000 --seed 3",
                           dir);
  REQUIRE(eval.exit_code == 0);
  const double evaluated = std::stod(eval.out);

  // Both numbers estimate the same expected spread; bound their gap by the
  // sum of their standard errors, with the variance measured on a third,
  // independent snapshot set.
  spreadlab::WeightedGraph g =
      spreadlab::load_edge_list(dir.file("g.txt").string(), 0.3);
  std::vector<spreadlab::NodeId> seeds;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    seeds.push_back(*g.node_of(std::stoull(fields_of(lines[i])[7])));
  }
  auto probe = spreadlab::sample_snapshot_set(g, 4000, 98765);
  auto est = spreadlab::snapshot_spread(probe, spreadlab::SeedSet(seeds));
  const double se_select = std::sqrt(est.variance / 400.0);
  const double se_eval = std::sqrt(est.variance / 4000.0);
  CHECK(std::abs(evaluated - last_spread) <=
        4.0 * (se_select + se_eval) + 1e-9);
}

TEST_CASE("cli: evaluate accepts an explicit seed list") {
  TempDir dir;
  testutil::write_file(dir.file("chain.txt"), kChain);
  CliResult res = run_cli("evaluate --graph " + dir.file("chain.txt").string() +
                              " --p 1.0 --seeds 0 --eval-R 20 --seed 1",
                          dir);
  CHECK(res.exit_code == 0);
  CHECK(res.out == "3\n");

  CHECK(run_cli("evaluate --graph " + dir.file("chain.txt").string() +
                    " --p 1.0 --eval-R 20 --seed 1",
                dir)
            .exit_code == 2);  // neither --seeds nor --seeds-csv
  CHECK(run_cli("evaluate --graph " + dir.file("chain.txt").string() +
                    " --p 1.0 --seeds 0 --seeds-csv x.csv --eval-R 20 --seed 1",
                dir)
            .exit_code == 2);  // both
  CHECK(run_cli("evaluate --graph " + dir.file("chain.txt").string() +
                    " --p 1.0 --seeds 99 --eval-R 20 --seed 1",
                dir)
            .exit_code == 3);  // unknown label
}

TEST_CASE("cli: snapshot cache reuse") {
  TempDir dir;
  CliResult gen = run_cli("gen --n 40 --avg-degree 3 --seed 1 --out " +
                              dir.file("g.txt").string(),
                          dir);
  REQUIRE(gen.exit_code == 0);

  CliResult sample = run_cli("sample --graph " + dir.file("g.txt").string() +
                                 " --p 0.3 --R 25 --seed 6 --snapshots " +
                                 dir.file("cache.snaps").string(),
                             dir);
  REQUIRE(sample.exit_code == 0);
  REQUIRE(std::filesystem::exists(dir.file("cache.snaps")));

  const std::string select_flags = " --p 0.3 --algo static --k 3 --R 25 --seed 6";
  CliResult cached = run_cli("select --graph " + dir.file("g.txt").string() +
                                 select_flags + " --snapshots " +
                                 dir.file("cache.snaps").string(),
                             dir);
  CliResult fresh = run_cli(
      "select --graph " + dir.file("g.txt").string() + select_flags, dir);
  REQUIRE(cached.exit_code == 0);
  REQUIRE(fresh.exit_code == 0);
  CHECK(strip_timing(cached.out) == strip_timing(fresh.out));

  // cache sampled under a different seed is rejected
  CliResult mismatch = run_cli("select --graph " + dir.file("g.txt").string() +
                                   " --p 0.3 --algo static --k 3 --R 25 "
                                   "--seed 7 --snapshots " +
                                   dir.file("cache.snaps").string(),
                               dir);
  CHECK(mismatch.exit_code == 3);
}

TEST_CASE("cli: audit reports zero violations on a fixed set") {
  TempDir dir;
  testutil::write_file(dir.file("chain.txt"), kChain);
  CliResult res = run_cli("audit --graph " + dir.file("chain.txt").string() +
                              " --p 0.5 --R 10 --trials 200 --seed 3",
                          dir);
  CHECK(res.exit_code == 0);
  CHECK(res.out.find("trials=200 violations=0") != std::string::npos);
}

TEST_CASE("cli: bench reports both variants and their agreement") {
  TempDir dir;
  CliResult gen = run_cli("gen --n 150 --avg-degree 5 --seed 2 --out " +
                              dir.file("g.txt").string(),
                          dir);
  REQUIRE(gen.exit_code == 0);
  CliResult res = run_cli("bench --graph " + dir.file("g.txt").string() +
                              " --p 0.1 --k 5 --R 40 --seed 8",
                          dir);
  REQUIRE(res.exit_code == 0);
  CHECK(res.out.find("static evaluations=") != std::string::npos);
  CHECK(res.out.find("static-du evaluations=") != std::string::npos);
  CHECK(res.out.find("seeds_identical=yes") != std::string::npos);
  CHECK(res.out.find("gains_identical=yes") != std::string::npos);
}

TEST_CASE("cli: gen is deterministic and supports both models") {
  TempDir dir;
  CliResult a = run_cli("gen --n 30 --avg-degree 3 --model er --seed 4", dir);
  CliResult b = run_cli("gen --n 30 --avg-degree 3 --model er --seed 4", dir);
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);

  CliResult pa = run_cli("gen --n 30 --avg-degree 2 --model pa --seed 4", dir);
  CHECK(pa.exit_code == 0);
  CHECK_FALSE(pa.out.empty());

  CliResult with_p = run_cli("gen --n 10 --avg-degree 2 --seed 1 --p 0.25", dir);
  REQUIRE(with_p.exit_code == 0);
  CHECK(with_p.out.find(" 0.25") != std::string::npos);
}

TEST_CASE("cli: help exits 0 and omitted seed is echoed") {
  TempDir dir;
  CHECK(run_cli("--help", dir).exit_code == 0);
  CHECK(run_cli("select --help", dir).exit_code == 0);

  testutil::write_file(dir.file("chain.txt"), kChain);
  CliResult res = run_cli("select --graph " + dir.file("chain.txt").string() +
                              " --p 1.0 --algo static --k 1 --R 5",
                          dir);
  CHECK(res.exit_code == 0);
  CHECK(res.err.find("seed=") != std::string::npos);
}
