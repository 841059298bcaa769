#include <doctest.h>

#include <fstream>
#include <numeric>
#include <sstream>

#include "graphfactor/error.hpp"
#include "graphfactor/graph.hpp"
#include "unit/oracles.hpp"

using namespace graphfactor;

namespace {

LoadedGraph parse(const std::string& text) {
  std::istringstream in(text);
  return parse_edge_list(in);
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected graphfactor::Error");
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST_CASE("two-edge path file") {
  auto lg = parse("0 1\n1 2");
  CHECK(lg.graph.num_nodes() == 3);
  CHECK(lg.graph.num_edges() == 2);
  CHECK(lg.graph.volume() == 4);
  CHECK(lg.graph.has_edge(0, 1));
  CHECK(lg.graph.has_edge(2, 1));
  CHECK_FALSE(lg.graph.has_edge(0, 2));
}

TEST_CASE("comments, directed duplicates and self-loops") {
  auto lg = parse("# c\n5 9\n9 5\n5 5");
  CHECK(lg.graph.num_nodes() == 2);
  CHECK(lg.graph.num_edges() == 1);
  CHECK(lg.graph.volume() == 2);
  CHECK(lg.self_loops_dropped == 1);
  CHECK(lg.duplicates_merged == 1);
  CHECK(lg.external_ids == std::vector<std::int64_t>{5, 9});
}

TEST_CASE("karate file") {
  auto g = oracle::karate();
  CHECK(g.num_nodes() == 34);
  CHECK(g.num_edges() == 78);
  CHECK(g.volume() == 156);
}

TEST_CASE("loader errors") {
  CHECK(code_of([] { parse("0 1\n1 x\n"); }) == ErrorCode::kParse);
  CHECK(code_of([] { parse("0 1 2\n"); }) == ErrorCode::kParse);
  CHECK(code_of([] { parse("0\n"); }) == ErrorCode::kParse);
  CHECK(code_of([] { parse("# only comments\n\n"); }) == ErrorCode::kEmptyGraph);
  CHECK(code_of([] { parse("3 3\n"); }) == ErrorCode::kEmptyGraph);
  CHECK(code_of([] { load_edge_list("/nonexistent/graph.txt"); }) == ErrorCode::kIo);
}

TEST_CASE("parse error names the line") {
  try {
    parse("0 1\n\n2 oops\n");
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("3") != std::string::npos);
  }
}

TEST_CASE("from_edges validation") {
  CHECK(code_of([] { Graph::from_edges(3, {{0, 0}}); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { Graph::from_edges(3, {{0, 1}, {1, 0}}); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { Graph::from_edges(3, {{0, 3}}); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("adjacency of P2 and K3") {
  auto a2 = to_dense(adjacency(oracle::path_graph(2)));
  CHECK(a2(0, 1) == 1.0);
  CHECK(a2(1, 0) == 1.0);
  CHECK(a2(0, 0) == 0.0);
  auto a3 = to_dense(adjacency(oracle::complete_graph(3)));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(a3(i, j) == (i == j ? 0.0 : 1.0));
}

TEST_CASE("karate adjacency row sums equal degrees") {
  auto g = oracle::karate();
  auto a = adjacency(g);
  std::vector<std::size_t> deg(34, 0);
  for (const auto& e : g.edges()) {
    ++deg[e.u];
    ++deg[e.v];
  }
  for (NodeId u = 0; u < 34; ++u) {
    auto vals = a.row_values(u);
    CHECK(std::accumulate(vals.begin(), vals.end(), 0.0) == static_cast<double>(deg[u]));
    CHECK(g.degree(u) == deg[u]);
  }
  auto d = to_dense(a);
  for (NodeId u = 0; u < 34; ++u) {
    CHECK(d(u, u) == 0.0);
    for (NodeId v = 0; v < 34; ++v) CHECK(d(u, v) == d(v, u));
  }
}

TEST_CASE("transition of P2, K3, star") {
  auto p2 = to_dense(transition(oracle::path_graph(2)));
  CHECK(p2(0, 1) == 1.0);
  CHECK(p2(1, 0) == 1.0);
  auto p3 = to_dense(transition(oracle::complete_graph(3)));
  CHECK(p3(0, 1) == 0.5);
  CHECK(p3(2, 0) == 0.5);
  CHECK(p3(1, 1) == 0.0);
  auto s = to_dense(transition(oracle::star_graph(3)));
  CHECK(s(0, 0) == 0.0);
  for (int j = 1; j <= 3; ++j) CHECK(s(0, j) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  for (int i = 1; i <= 3; ++i) {
    CHECK(s(i, 0) == 1.0);
    for (int j = 1; j <= 3; ++j) CHECK(s(i, j) == 0.0);
  }
}

TEST_CASE("transition rows sum to one, zero-degree rows empty") {
  auto g = Graph::from_edges(5, {{0, 1}, {1, 2}, {0, 2}, {2, 3}});
  auto p = transition(g);
  for (NodeId u = 0; u < 4; ++u) {
    auto vals = p.row_values(u);
    CHECK(std::abs(std::accumulate(vals.begin(), vals.end(), 0.0) - 1.0) <= 1e-12);
  }
  CHECK(p.row_values(4).empty());
}

TEST_CASE("subgraph_from_edges") {
  auto k3 = oracle::complete_graph(3);
  EdgeSubset keep{{{0, 1}, {1, 2}}, EdgeLabel::kPositive, EdgeOrigin::kTrain};
  auto p3 = subgraph_from_edges(k3, keep);
  CHECK(p3 == oracle::path_graph(3));
  CHECK(p3.num_nodes() == 3);
  CHECK(p3.volume() == 4);

  EdgeSubset all{{k3.edges().begin(), k3.edges().end()}, EdgeLabel::kPositive, EdgeOrigin::kTrain};
  CHECK(subgraph_from_edges(k3, all) == k3);

  EdgeSubset bad{{{0, 1}}, EdgeLabel::kPositive, EdgeOrigin::kTrain};
  CHECK(code_of([&] { subgraph_from_edges(oracle::path_graph(3), EdgeSubset{{{0, 2}}}); }) ==
        ErrorCode::kInvalidArgument);
  CHECK(subgraph_from_edges(oracle::path_graph(3), bad).num_edges() == 1);
}

TEST_CASE("edge list round trip") {
  auto g = oracle::karate();
  const auto path = oracle::temp_path("karate_roundtrip.txt");
  write_edge_list(g, path);
  auto again = load_edge_list(path);
  CHECK(again.graph == g);
}

TEST_CASE("node map CSV") {
  auto lg = parse("10 30\n30 20\n");
  std::ostringstream out;
  write_node_map(lg.external_ids, out);
  CHECK(out.str() == "external_id,internal_id\n10,0\n20,1\n30,2\n");
}

TEST_CASE("sparse matrix invariants") {
  CHECK_THROWS_AS(SparseMatrix(2, 2, {0, 2, 2}, {1, 0}, {1.0, 1.0}), Error);
  CHECK_THROWS_AS(SparseMatrix(2, 2, {0, 1, 1}, {0}, {0.0}), Error);
  SparseMatrix m(2, 3, {0, 2, 3}, {0, 2, 1}, {1.0, 2.0, 3.0});
  auto t = m.transposed();
  CHECK(t.rows() == 3);
  CHECK(t.at(2, 0) == 2.0);
  CHECK(t.at(1, 1) == 3.0);
  CHECK(t.at(0, 1) == 0.0);
}
