#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "csv.hpp"
#include "spreadlab/errors.hpp"
#include "spreadlab/generators.hpp"
#include "spreadlab/graph.hpp"
#include "spreadlab/rng.hpp"
#include "spreadlab/selection.hpp"
#include "spreadlab/snapshot.hpp"
#include "spreadlab/spread.hpp"

namespace spreadlab::cli {

namespace {

using Clock = std::chrono::steady_clock;

// Stream tags keep the probability assignment, evaluation snapshots and
// audit trials independent of the selection snapshots under one --seed.
constexpr std::uint64_t kProbModelStream = 0x70726f62;
constexpr std::uint64_t kEvalStream = 0x6576616c;
constexpr std::uint64_t kAuditStream = 0x61756474;

double ms_between(Clock::time_point t0, Clock::time_point t1) {
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

// CSV timing columns carry whole milliseconds so that identical runs
// produce identical bytes (sub-ms jitter would defeat reproducible output).
double round_ms(double ms) { return std::floor(ms + 0.5); }

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag,
                           std::ostream& err) {
  if (flag) return *flag;
  std::random_device rd;
  std::uint64_t seed =
      (static_cast<std::uint64_t>(rd()) << 32) ^ static_cast<std::uint64_t>(rd());
  err << "seed=" << seed << "\n";
  return seed;
}

ProbabilityModel make_model(const RunConfig& cfg) {
  if (*cfg.prob_model == "uniform") return UniformProbability{*cfg.uniform_p};
  if (*cfg.prob_model == "wc") return WeightedCascade{};
  return Trivalency{};
}

// --p alone fills missing probabilities at parse time; --prob-model
// reassigns every edge afterwards.
WeightedGraph load_graph(const RunConfig& cfg) {
  WeightedGraph g = load_edge_list(cfg.graph_path, cfg.uniform_p);
  if (cfg.prob_model) {
    g = assign_probabilities(g, make_model(cfg),
                             derive_seed(cfg.seed, kProbModelStream));
  }
  return g;
}

void require_probabilities(const WeightedGraph& g) {
  if (!g.has_probabilities()) {
    throw ConfigError(
        "graph has edges without probabilities; pass --p or --prob-model");
  }
}

SnapshotSet acquire_snapshots(const WeightedGraph& g, const RunConfig& cfg,
                              double& sampling_ms) {
  const auto t0 = Clock::now();
  SnapshotSet ss;
  if (!cfg.snapshots_path.empty() &&
      std::filesystem::exists(cfg.snapshots_path)) {
    ss = load_snapshot_set(cfg.snapshots_path, g);
    if (ss.size() != cfg.R || ss.rng_seed() != cfg.seed) {
      throw ConfigError("snapshot cache " + cfg.snapshots_path +
                        " was sampled with different --R/--seed");
    }
  } else {
    ss = sample_snapshot_set(g, cfg.R, cfg.seed);
    if (!cfg.snapshots_path.empty()) save_snapshot_set(ss, cfg.snapshots_path);
  }
  sampling_ms = ms_between(t0, Clock::now());
  return ss;
}

std::vector<ResultRow> build_rows(const RunConfig& cfg, const WeightedGraph& g,
                                  const SelectionResult& res) {
  std::vector<ResultRow> rows;
  rows.reserve(res.seeds.size());
  for (std::size_t i = 0; i < res.seeds.size(); ++i) {
    ResultRow row;
    row.algorithm = cfg.algorithm;
    row.n = g.node_count();
    row.edge_count = g.edge_count();
    row.k = cfg.k;
    row.R = cfg.R;
    row.seed = cfg.seed;
    row.iteration = i + 1;
    row.chosen_node = g.label_of(res.seeds.members()[i]);
    row.marginal_gain = res.marginal_gains[i];
    row.cumulative_spread = res.spread_trace[i];
    row.evaluations = res.evaluations;
    row.sampling_ms = round_ms(res.elapsed.sampling_ms);
    row.selection_ms = round_ms(res.elapsed.selection_ms);
    rows.push_back(std::move(row));
  }
  return rows;
}

void emit_csv(const std::vector<ResultRow>& rows, const RunConfig& cfg,
              std::ostream& out) {
  if (cfg.output_path.empty()) {
    write_csv(rows, out);
    return;
  }
  std::ofstream file(cfg.output_path);
  if (!file) throw IoError("cannot open output file: " + cfg.output_path);
  write_csv(rows, file);
  if (!file) throw IoError("write failed: " + cfg.output_path);
}

// Baselines carry no gain trace of their own; score prefixes on the
// acquired snapshot set so the CSV has the same shape for every algorithm.
void fill_trace(SelectionResult& res, const SnapshotSet& ss) {
  res.spread_trace = prefix_spreads(ss, res.seeds);
  res.marginal_gains.resize(res.spread_trace.size());
  double prev = 0.0;
  for (std::size_t i = 0; i < res.spread_trace.size(); ++i) {
    res.marginal_gains[i] = res.spread_trace[i] - prev;
    prev = res.spread_trace[i];
  }
}

int cmd_gen(const RunConfig& cfg, std::ostream& out) {
  WeightedGraph g = cfg.gen_model == "pa"
                        ? preferential_attachment(
                              static_cast<NodeId>(cfg.gen_n),
                              cfg.gen_avg_degree, cfg.seed)
                        : erdos_renyi(static_cast<NodeId>(cfg.gen_n),
                                      cfg.gen_avg_degree, cfg.seed);
  if (cfg.prob_model) {
    g = assign_probabilities(g, make_model(cfg),
                             derive_seed(cfg.seed, kProbModelStream));
  } else if (cfg.uniform_p) {
    g = assign_probabilities(g, UniformProbability{*cfg.uniform_p}, 0);
  }
  if (cfg.output_path.empty()) {
    write_edge_list(g, out);
  } else {
    save_edge_list(g, cfg.output_path);
  }
  return 0;
}

int cmd_sample(const RunConfig& cfg, std::ostream& err) {
  WeightedGraph g = load_graph(cfg);
  require_probabilities(g);
  SnapshotSet ss = sample_snapshot_set(g, cfg.R, cfg.seed);
  save_snapshot_set(ss, cfg.snapshots_path);
  err << "wrote " << ss.size() << " snapshots to " << cfg.snapshots_path
      << "\n";
  return 0;
}

int cmd_select(const RunConfig& cfg, std::ostream& out) {
  WeightedGraph g = load_graph(cfg);
  require_probabilities(g);

  SelectionResult res;
  if (cfg.algorithm == "conventional") {
    res = conventional_greedy(g, cfg.k, cfg.R, cfg.seed);
  } else {
    double sampling_ms = 0.0;
    SnapshotSet ss = acquire_snapshots(g, cfg, sampling_ms);
    if (cfg.algorithm == "static") {
      res = static_greedy_on(ss, cfg.k);
    } else if (cfg.algorithm == "static-du") {
      res = static_greedy_du_on(ss, cfg.k);
    } else if (cfg.algorithm == "degree") {
      res = degree_seeds(g, cfg.k);
      fill_trace(res, ss);
    } else {  // random
      res = random_seeds(g, cfg.k, cfg.seed);
      fill_trace(res, ss);
    }
    res.elapsed.sampling_ms = sampling_ms;
  }

  emit_csv(build_rows(cfg, g, res), cfg, out);
  return 0;
}

std::vector<Label> parse_label_list(const std::string& text) {
  std::vector<Label> labels;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (token.empty()) continue;
    try {
      labels.push_back(std::stoull(token));
    } catch (const std::exception&) {
      throw ParseError("seed label is not a non-negative integer: \"" + token +
                       "\"");
    }
  }
  if (labels.empty()) throw ParseError("empty seed list");
  return labels;
}

std::vector<Label> seeds_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open seeds CSV: " + path);

  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty CSV: " + path);

  auto split = [](const std::string& record) {
    std::vector<std::string> fields;
    std::stringstream stream(record);
    std::string field;
    while (std::getline(stream, field, ',')) fields.push_back(field);
    return fields;
  };

  auto header = split(line);
  auto it = std::find(header.begin(), header.end(), "chosen_node");
  if (it == header.end()) {
    throw ParseError("CSV has no chosen_node column: " + path);
  }
  const auto column = static_cast<std::size_t>(it - header.begin());

  std::vector<Label> labels;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split(line);
    if (fields.size() <= column) {
      throw ParseError("CSV record with too few fields: " + path);
    }
    labels.push_back(std::stoull(fields[column]));
  }
  if (labels.empty()) throw ParseError("CSV has no records: " + path);
  return labels;
}

SeedSet map_labels(const WeightedGraph& g, const std::vector<Label>& labels) {
  SeedSet seeds;
  for (Label label : labels) {
    auto node = g.node_of(label);
    if (!node) {
      throw Error("seed label " + std::to_string(label) +
                  " does not name a node of the graph");
    }
    seeds.add(*node);
  }
  return seeds;
}

int cmd_evaluate(const RunConfig& cfg, std::ostream& out) {
  WeightedGraph g = load_graph(cfg);
  require_probabilities(g);

  std::vector<Label> labels = !cfg.seeds_csv.empty()
                                  ? seeds_from_csv(cfg.seeds_csv)
                                  : parse_label_list(cfg.seeds_list);
  SeedSet seeds = map_labels(g, labels);

  // Evaluation snapshots come from an offset stream so they are
  // independent of the snapshots any selection used.
  SnapshotSet ss =
      sample_snapshot_set(g, cfg.eval_R, derive_seed(cfg.seed, kEvalStream));
  out << format_real(snapshot_spread(ss, seeds).value) << "\n";
  return 0;
}

int cmd_bench(const RunConfig& cfg, std::ostream& out) {
  WeightedGraph g = load_graph(cfg);
  require_probabilities(g);

  SelectionResult plain = static_greedy(g, cfg.k, cfg.R, cfg.seed);
  SelectionResult du = static_greedy_du(g, cfg.k, cfg.R, cfg.seed);

  const bool seeds_equal =
      std::ranges::equal(plain.seeds.members(), du.seeds.members());
  const bool gains_equal = plain.marginal_gains == du.marginal_gains;
  const double ratio = plain.elapsed.selection_ms > 0.0
                           ? du.elapsed.selection_ms / plain.elapsed.selection_ms
                           : 0.0;

  out << "static evaluations=" << plain.evaluations
      << " selection_ms=" << format_real(plain.elapsed.selection_ms) << "\n";
  out << "static-du evaluations=" << du.evaluations
      << " selection_ms=" << format_real(du.elapsed.selection_ms) << "\n";
  out << "wall_ratio=" << format_real(ratio)
      << " speedup=" << format_real(ratio > 0.0 ? 1.0 / ratio : 0.0) << "\n";
  out << "seeds_identical=" << (seeds_equal ? "yes" : "no") << "\n";
  out << "gains_identical=" << (gains_equal ? "yes" : "no") << "\n";
  return 0;
}

int cmd_audit(const RunConfig& cfg, std::ostream& out) {
  WeightedGraph g = load_graph(cfg);
  require_probabilities(g);

  SnapshotSet ss = sample_snapshot_set(g, cfg.R, cfg.seed);
  SubmodularityReport report =
      check_submodularity(ss, cfg.trials, derive_seed(cfg.seed, kAuditStream));

  out << "trials=" << report.trials << " violations=" << report.violations.size()
      << "\n";
  auto print_set = [&](const std::vector<NodeId>& nodes) {
    out << '{';
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (i) out << ' ';
      out << g.label_of(nodes[i]);
    }
    out << '}';
  };
  for (const auto& v : report.violations) {
    out << "violation S=";
    print_set(v.smaller);
    out << " T=";
    print_set(v.larger);
    out << " v=" << g.label_of(v.probe) << " gain_S=" << format_real(v.gain_smaller)
        << " gain_T=" << format_real(v.gain_larger) << "\n";
  }
  return 0;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::optional<std::uint64_t> seed_flag;

  CLI::App app{"spreadlab: influence maximization under the independent "
               "cascade model (static-snapshot greedy, baselines, estimators)"};
  app.require_subcommand(1);

  auto add_prob_opts = [&](CLI::App* cmd) {
    cmd->add_option("--p", cfg.uniform_p,
                    "Uniform probability: default for edges lacking an "
                    "explicit value; with --prob-model uniform, reassigns "
                    "every edge")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--prob-model", cfg.prob_model,
                    "Probability model: uniform (needs --p), wc, trivalency")
        ->check(CLI::IsMember({"uniform", "wc", "trivalency"}));
  };
  auto add_graph_opt = [&](CLI::App* cmd) {
    cmd->add_option("--graph", cfg.graph_path, "Edge-list graph file")
        ->required();
    add_prob_opts(cmd);
  };
  auto add_seed_opt = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed_flag,
                    "Master RNG seed (default: drawn from the OS and echoed "
                    "on stderr)");
  };

  CLI::App* gen = app.add_subcommand("gen", "Generate a synthetic graph");
  gen->add_option("--n", cfg.gen_n, "Node count")
      ->required()
      ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{100000000}));
  gen->add_option("--avg-degree", cfg.gen_avg_degree,
                  "Average total degree: the graph gets ~n*d/2 directed edges")
      ->required()
      ->check(CLI::NonNegativeNumber);
  gen->add_option("--model", cfg.gen_model, "Generator: er or pa")
      ->check(CLI::IsMember({"er", "pa"}));
  gen->add_option("--out", cfg.output_path, "Output path (default stdout)");
  add_prob_opts(gen);
  add_seed_opt(gen);

  CLI::App* sample =
      app.add_subcommand("sample", "Materialize a snapshot-set cache file");
  add_graph_opt(sample);
  sample->add_option("--R", cfg.R, "Snapshot count")
      ->required()
      ->check(CLI::PositiveNumber);
  sample->add_option("--snapshots", cfg.snapshots_path, "Cache file to write")
      ->required();
  add_seed_opt(sample);

  CLI::App* select = app.add_subcommand("select", "Run a seed-selection "
                                                  "algorithm; writes CSV");
  add_graph_opt(select);
  select->add_option("--algo", cfg.algorithm, "Algorithm")
      ->check(CLI::IsMember(
          {"static", "static-du", "conventional", "degree", "random"}));
  select->add_option("--k", cfg.k, "Seed count")
      ->required()
      ->check(CLI::PositiveNumber);
  select->add_option("--R", cfg.R, "Snapshot count (per iteration for "
                                   "conventional)")
      ->required()
      ->check(CLI::PositiveNumber);
  select->add_option("--out", cfg.output_path, "CSV path (default stdout)");
  select->add_option("--snapshots", cfg.snapshots_path,
                     "Snapshot cache: loaded when present, else written");
  add_seed_opt(select);

  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "Score a seed list with an independent snapshot set");
  add_graph_opt(evaluate);
  evaluate->add_option("--seeds", cfg.seeds_list,
                       "Comma-separated external node labels");
  evaluate->add_option("--seeds-csv", cfg.seeds_csv,
                       "CSV from `select`; uses the chosen_node column");
  evaluate->add_option("--eval-R", cfg.eval_R, "Evaluation snapshot count")
      ->check(CLI::PositiveNumber);
  add_seed_opt(evaluate);

  CLI::App* bench = app.add_subcommand(
      "bench", "Compare static and static-du on the same inputs");
  add_graph_opt(bench);
  bench->add_option("--k", cfg.k, "Seed count")
      ->required()
      ->check(CLI::PositiveNumber);
  bench->add_option("--R", cfg.R, "Snapshot count")
      ->required()
      ->check(CLI::PositiveNumber);
  add_seed_opt(bench);

  CLI::App* audit = app.add_subcommand(
      "audit", "Sample submodularity/monotonicity checks on a fixed "
               "snapshot set");
  add_graph_opt(audit);
  audit->add_option("--R", cfg.R, "Snapshot count")
      ->required()
      ->check(CLI::PositiveNumber);
  audit->add_option("--trials", cfg.trials, "Sampled (S, T, v) triples")
      ->check(CLI::PositiveNumber);
  add_seed_opt(audit);

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  // Cross-flag usage checks.
  if (gen->parsed()) cfg.command = Command::gen;
  if (sample->parsed()) cfg.command = Command::sample;
  if (select->parsed()) cfg.command = Command::select;
  if (evaluate->parsed()) cfg.command = Command::evaluate;
  if (bench->parsed()) cfg.command = Command::bench;
  if (audit->parsed()) cfg.command = Command::audit;

  if (cfg.prob_model && *cfg.prob_model == "uniform" && !cfg.uniform_p) {
    err << "error: --prob-model uniform requires --p\n";
    return 2;
  }
  if (cfg.command == Command::select && cfg.algorithm == "conventional" &&
      !cfg.snapshots_path.empty()) {
    err << "error: --snapshots cannot be combined with --algo conventional "
           "(it resamples every iteration)\n";
    return 2;
  }
  if (cfg.command == Command::evaluate &&
      cfg.seeds_list.empty() == cfg.seeds_csv.empty()) {
    err << "error: evaluate needs exactly one of --seeds or --seeds-csv\n";
    return 2;
  }

  cfg.seed = resolve_seed(seed_flag, err);

  try {
    switch (cfg.command) {
      case Command::gen:
        return cmd_gen(cfg, out);
      case Command::sample:
        return cmd_sample(cfg, err);
      case Command::select:
        return cmd_select(cfg, out);
      case Command::evaluate:
        return cmd_evaluate(cfg, out);
      case Command::bench:
        return cmd_bench(cfg, out);
      case Command::audit:
        return cmd_audit(cfg, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}

}  // namespace spreadlab::cli
