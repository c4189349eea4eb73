#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "spreadlab/errors.hpp"
#include "spreadlab/generators.hpp"
#include "spreadlab/graph.hpp"
#include "spreadlab/rng.hpp"
#include "test_util.hpp"

using namespace spreadlab;

namespace {

WeightedGraph parse(const std::string& text,
                    std::optional<double> default_p = {}) {
  std::istringstream in(text);
  return parse_edge_list(in, default_p);
}

}  // namespace

TEST_CASE("parse_edge_list: two-column records with default probability") {
  WeightedGraph g = parse("0 1\n1 2", 1.0);
  CHECK(g.node_count() == 3);
  CHECK(g.edge_count() == 2);
  CHECK(g.edge_target(testutil::find_edge(g, 0, 1)) == 1);
  CHECK(g.edge_target(testutil::find_edge(g, 1, 2)) == 2);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    CHECK(g.edge_probability(e) == 1.0);
  }
}

TEST_CASE("parse_edge_list: comments and explicit probabilities") {
  WeightedGraph g = parse("# header\n0 1 0.5");
  CHECK(g.node_count() == 2);
  CHECK(g.edge_count() == 1);
  CHECK(g.edge_probability(0) == 0.5);
}

TEST_CASE("parse_edge_list: probability out of range reports the line") {
  try {
    parse("0 1 1.5");
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(e.line() == 1);
  }
}

TEST_CASE("parse_edge_list: malformed lines") {
  CHECK_THROWS_AS(parse("0"), ParseError);
  CHECK_THROWS_AS(parse("zero one"), ParseError);
  CHECK_THROWS_AS(parse("0 1 x"), ParseError);
  CHECK_THROWS_AS(parse("0 1 0.5 7"), ParseError);
  CHECK_THROWS_AS(parse("-1 2"), ParseError);
  CHECK_THROWS_AS(parse("0 1 -0.25"), DomainError);

  try {
    parse("0 1\n\n0 2\nbroken");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
}

TEST_CASE("parse_edge_list: duplicates keep the first occurrence") {
  WeightedGraph g = parse("0 1 0.3\n0 1 0.9\n1 0 0.7");
  CHECK(g.edge_count() == 2);
  CHECK(g.edge_probability(testutil::find_edge(g, 0, 1)) == 0.3);
  CHECK(g.edge_probability(testutil::find_edge(g, 1, 0)) == 0.7);
  CHECK(g.ingest_stats().duplicate_edges == 1);
}

TEST_CASE("parse_edge_list: self-loops are dropped") {
  WeightedGraph g = parse("5 5 0.4\n0 1 0.2");
  CHECK(g.node_count() == 2);
  CHECK(g.edge_count() == 1);
  CHECK(g.ingest_stats().self_loops == 1);
}

TEST_CASE("parse_edge_list: blank lines and leading whitespace") {
  WeightedGraph g = parse("\n  # indented comment\n  0 1 0.5\n\n1\t2\t0.25\n");
  CHECK(g.node_count() == 3);
  CHECK(g.edge_count() == 2);
}

TEST_CASE("labels remap densely and round-trip") {
  WeightedGraph g = parse("100 7\n7 3");
  CHECK(g.node_count() == 3);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    auto back = g.node_of(g.label_of(v));
    REQUIRE(back.has_value());
    CHECK(*back == v);
  }
  CHECK_FALSE(g.node_of(12345).has_value());
  // first appearance order
  CHECK(g.label_of(0) == 100);
  CHECK(g.label_of(1) == 7);
  CHECK(g.label_of(2) == 3);
}

TEST_CASE("unassigned probabilities survive parsing without a default") {
  WeightedGraph g = parse("0 1\n1 2 0.5");
  CHECK_FALSE(g.has_probabilities());
  CHECK(g.edge_probability(testutil::find_edge(g, 0, 1)) < 0.0);
  CHECK(g.edge_probability(testutil::find_edge(g, 1, 2)) == 0.5);
}

TEST_CASE("from_dense_edges keeps isolated nodes") {
  WeightedGraph g = testutil::make_graph(5, {{0, 1, 0.5}});
  CHECK(g.node_count() == 5);
  CHECK(g.edge_count() == 1);
  CHECK(g.out_degree(4) == 0);
  CHECK_THROWS_AS(testutil::make_graph(2, {{0, 3, 0.5}}), ArgumentError);
}

TEST_CASE("assign_probabilities: weighted cascade uses target in-degree") {
  // star with 4 edges into node 4
  WeightedGraph g = testutil::make_graph(
      5, {{0, 4, -1}, {1, 4, -1}, {2, 4, -1}, {3, 4, -1}});
  WeightedGraph assigned = assign_probabilities(g, WeightedCascade{});
  for (EdgeId e = 0; e < assigned.edge_count(); ++e) {
    CHECK(assigned.edge_probability(e) == 0.25);
  }
}

TEST_CASE("assign_probabilities: uniform") {
  WeightedGraph g = testutil::make_graph(3, {{0, 1, -1}, {1, 2, -1}});
  WeightedGraph assigned = assign_probabilities(g, UniformProbability{0.5});
  for (EdgeId e = 0; e < assigned.edge_count(); ++e) {
    CHECK(assigned.edge_probability(e) == 0.5);
  }
  CHECK_THROWS_AS(assign_probabilities(g, UniformProbability{1.5}),
                  DomainError);
}

TEST_CASE("assign_probabilities: trivalency draws from the value set") {
  WeightedGraph g =
      testutil::make_graph(3, {{0, 1, -1}, {1, 2, -1}, {2, 0, -1}});
  WeightedGraph a = assign_probabilities(g, Trivalency{}, 42);
  WeightedGraph b = assign_probabilities(g, Trivalency{}, 42);
  const std::set<double> allowed = {0.1, 0.01, 0.001};
  for (EdgeId e = 0; e < a.edge_count(); ++e) {
    CHECK(allowed.count(a.edge_probability(e)) == 1);
    CHECK(a.edge_probability(e) == b.edge_probability(e));
  }
  // edge set untouched
  CHECK(a.edge_count() == g.edge_count());
  for (EdgeId e = 0; e < a.edge_count(); ++e) {
    CHECK(a.edge_source(e) == g.edge_source(e));
    CHECK(a.edge_target(e) == g.edge_target(e));
  }
}

TEST_CASE("ingestion idempotence: parse-write-parse is the identity") {
  RandomStream stream(99);
  for (int trial = 0; trial < 20; ++trial) {
    // random labeled edges, some with probabilities, some without
    std::vector<LabeledEdge> edges;
    const int m = 1 + static_cast<int>(stream.next_below(40));
    for (int i = 0; i < m; ++i) {
      LabeledEdge e;
      e.u = stream.next_below(30) * 7;  // sparse labels
      e.v = stream.next_below(30) * 7;
      if (stream.next_unit() < 0.7) e.p = stream.next_unit();
      edges.push_back(e);
    }
    WeightedGraph g = WeightedGraph::from_edges(edges);

    std::ostringstream first;
    write_edge_list(g, first);
    std::istringstream in(first.str());
    WeightedGraph reparsed = parse_edge_list(in);
    CHECK(g == reparsed);

    std::ostringstream second;
    write_edge_list(reparsed, second);
    CHECK(first.str() == second.str());
  }
}

TEST_CASE("generators: erdos_renyi is deterministic and self-loop free") {
  WeightedGraph a = erdos_renyi(100, 4.0, 7);
  WeightedGraph b = erdos_renyi(100, 4.0, 7);
  CHECK(a == b);
  CHECK(a.node_count() == 100);
  // expected 200 edges (total degree 4); 4 sigma of the binomial is ~56
  CHECK(a.edge_count() > 140);
  CHECK(a.edge_count() < 260);
  for (EdgeId e = 0; e < a.edge_count(); ++e) {
    CHECK(a.edge_source(e) != a.edge_target(e));
  }
  CHECK_FALSE(erdos_renyi(100, 4.0, 8) == a);
  CHECK(erdos_renyi(1, 4.0, 1).edge_count() == 0);
}

TEST_CASE("generators: preferential attachment emits ~d/2 edges per node") {
  WeightedGraph g = preferential_attachment(200, 4.0, 11);
  CHECK(g.node_count() == 200);
  CHECK(g.edge_count() == 1 + 2 * 198);  // node 1 clamps to 1 target, rest emit 2
  CHECK(g == preferential_attachment(200, 4.0, 11));
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    CHECK(g.edge_source(e) > g.edge_target(e));
  }
}

TEST_CASE("content hash tracks structure and probabilities") {
  WeightedGraph g1 = testutil::make_graph(3, {{0, 1, 0.5}, {1, 2, 0.5}});
  WeightedGraph g2 = testutil::make_graph(3, {{0, 1, 0.5}, {1, 2, 0.5}});
  WeightedGraph g3 = testutil::make_graph(3, {{0, 1, 0.5}, {1, 2, 0.25}});
  WeightedGraph g4 = testutil::make_graph(3, {{0, 1, 0.5}, {2, 1, 0.5}});
  CHECK(g1.content_hash() == g2.content_hash());
  CHECK(g1.content_hash() != g3.content_hash());
  CHECK(g1.content_hash() != g4.content_hash());
}
