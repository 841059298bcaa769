#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "graphfactor/error.hpp"
#include "graphfactor/linkpred.hpp"
#include "unit/oracles.hpp"

using namespace graphfactor;

namespace {

Graph ten_edges() {
  std::mt19937_64 rng(41);
  return oracle::random_connected_graph(8, 3, rng);
}

std::set<Edge> as_set(const EdgeSubset& s) { return {s.pairs.begin(), s.pairs.end()}; }

}  // namespace

TEST_CASE("five folds of a ten-edge graph") {
  auto g = ten_edges();
  REQUIRE(g.num_edges() == 10);
  auto folds = kfold_split(g, 5, 1);
  REQUIRE(folds.size() == 5);
  std::set<Edge> all;
  for (const auto& f : folds) {
    CHECK(f.test_positive.pairs.size() == 2);
    CHECK(f.train_positive.pairs.size() == 8);
    CHECK(f.test_negative.pairs.size() == 2);
    CHECK(f.train_negative.pairs.size() == 8);
    for (const auto& e : f.test_positive.pairs) CHECK(all.insert(e).second);
  }
  CHECK(all == std::set<Edge>(g.edges().begin(), g.edges().end()));
}

TEST_CASE("fold invariants on karate") {
  auto g = oracle::karate();
  auto folds = kfold_split(g, 5, 3);
  std::size_t test_total = 0;
  for (const auto& f : folds) {
    auto tp = as_set(f.test_positive), trp = as_set(f.train_positive);
    auto tn = as_set(f.test_negative), trn = as_set(f.train_negative);
    CHECK(tp.size() + trp.size() == 78);
    for (const auto& e : tp) CHECK_FALSE(trp.count(e));
    for (const auto& e : tn) {
      CHECK_FALSE(g.has_edge(e.u, e.v));
      CHECK_FALSE(trn.count(e));
      CHECK(e.u < e.v);
    }
    for (const auto& e : trn) CHECK_FALSE(g.has_edge(e.u, e.v));
    CHECK(tn.size() == tp.size());
    CHECK(trn.size() == trp.size());
    CHECK(f.test_positive.origin == EdgeOrigin::kTest);
    CHECK(f.train_negative.label == EdgeLabel::kNegative);
    auto sub = subgraph_from_edges(g, f.train_positive);
    CHECK(sub.volume() == 2 * trp.size());
    CHECK_NOTHROW(check_fold(g, f));
    test_total += tp.size();
  }
  CHECK(test_total == 78);
}

TEST_CASE("splits are deterministic") {
  auto g = oracle::karate();
  auto a = kfold_split(g, 5, 7);
  auto b = kfold_split(g, 5, 7);
  for (int i = 0; i < 5; ++i) {
    CHECK(a[i].test_positive.pairs == b[i].test_positive.pairs);
    CHECK(a[i].train_negative.pairs == b[i].train_negative.pairs);
    CHECK(a[i].seed == b[i].seed);
  }
  auto c = kfold_split(g, 5, 8);
  CHECK(a[0].test_positive.pairs != c[0].test_positive.pairs);
}

TEST_CASE("split errors") {
  CHECK_THROWS_AS(kfold_split(oracle::karate(), 1, 0), Error);
  try {
    kfold_split(oracle::path_graph(3), 5, 0);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInsufficientPairs);
  }
}

TEST_CASE("check_fold catches violations") {
  auto g = oracle::karate();
  auto f = kfold_split(g, 5, 3)[0];
  auto bad = f;
  bad.train_negative.pairs.push_back(f.test_positive.pairs[0]);
  CHECK_THROWS_AS(check_fold(g, bad), Error);
  bad = f;
  bad.train_positive.pairs.push_back(f.test_positive.pairs[0]);
  CHECK_THROWS_AS(check_fold(g, bad), Error);
}

TEST_CASE("negatives: complete graph, forced pair, karate") {
  try {
    sample_negatives(oracle::complete_graph(3), 1, {}, 0);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInsufficientPairs);
  }
  auto p3 = sample_negatives(oracle::path_graph(3), 1, {}, 0);
  REQUIRE(p3.pairs.size() == 1);
  CHECK(p3.pairs[0] == Edge{0, 2});
  CHECK(p3.label == EdgeLabel::kNegative);

  auto g = oracle::karate();
  auto neg = sample_negatives(g, 78, {}, 5);
  CHECK(as_set(neg).size() == 78);
  for (const auto& e : neg.pairs) CHECK_FALSE(g.has_edge(e.u, e.v));
}

TEST_CASE("negatives honor the exclusion list") {
  auto g = oracle::path_graph(4);  // non-edges: 02, 03, 13
  std::vector<Edge> exclude{{0, 3}};
  auto s = sample_negatives(g, 2, exclude, 1);
  CHECK(as_set(s) == std::set<Edge>{{0, 2}, {1, 3}});
  CHECK_THROWS_AS(sample_negatives(g, 3, exclude, 1), Error);
}

TEST_CASE("scores") {
  DenseMatrix y(3, 2);
  y(0, 0) = 1;
  y(1, 1) = 1;
  const double r = std::sqrt(std::log(3.0) / 2);
  y(2, 0) = y(2, 1) = r;
  std::vector<Edge> pairs{{0, 1}};
  CHECK(score_pairs(y, pairs)[0] == 0.5);
  DenseMatrix z(2, 2);
  z(0, 0) = z(0, 1) = z(1, 0) = z(1, 1) = r;
  std::vector<Edge> same{{0, 1}};
  CHECK(score_pairs(z, same)[0] == doctest::Approx(0.75).epsilon(1e-14));
  std::vector<Edge> out_of_range{{0, 5}};
  CHECK_THROWS_AS(score_pairs(y, out_of_range), Error);
}

TEST_CASE("scores are monotone in the dot product") {
  std::mt19937_64 rng(42);
  auto y = oracle::random_matrix(30, 4, rng);
  std::vector<Edge> pairs;
  for (NodeId u = 0; u < 30; ++u)
    for (NodeId v = u + 1; v < 30; ++v) pairs.push_back({u, v});
  auto s = score_pairs(y, pairs);
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    double d0 = 0, d1 = 0;
    for (int k = 0; k < 4; ++k) {
      d0 += y(pairs[i - 1].u, k) * y(pairs[i - 1].v, k);
      d1 += y(pairs[i].u, k) * y(pairs[i].v, k);
    }
    if (d0 < d1) CHECK(s[i - 1] <= s[i]);
  }
}

TEST_CASE("roc_auc examples") {
  CHECK(roc_auc(std::vector{0.9, 0.8}, std::vector{0.7, 0.1}) == 1.0);
  CHECK(roc_auc(std::vector{0.5}, std::vector{0.5}) == 0.5);
  CHECK(roc_auc(std::vector{0.8, 0.4}, std::vector{0.6, 0.2}) == 0.75);
  CHECK_THROWS_AS(roc_auc(std::vector<double>{}, std::vector{0.1}), Error);
  CHECK_THROWS_AS(roc_auc(std::vector{0.1}, std::vector<double>{}), Error);
  CHECK_THROWS_AS(roc_auc(std::vector{std::numeric_limits<double>::quiet_NaN()}, std::vector{0.1}),
                  Error);
}

TEST_CASE("roc_auc equals the pairwise definition") {
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<int> size(1, 30), level(0, 6);
  for (int inst = 0; inst < 300; ++inst) {
    std::vector<double> pos(size(rng)), neg(size(rng));
    for (double& x : pos) x = level(rng) * 0.1;
    for (double& x : neg) x = level(rng) * 0.1;
    CHECK(std::abs(roc_auc(pos, neg) - oracle::brute_auc(pos, neg)) <= 1e-12);
  }
}

TEST_CASE("roc_auc is invariant under increasing maps") {
  std::mt19937_64 rng(44);
  std::normal_distribution<double> nd;
  for (int inst = 0; inst < 100; ++inst) {
    std::vector<double> pos(20), neg(25);
    for (double& x : pos) x = std::round(nd(rng) * 4) / 4;
    for (double& x : neg) x = std::round(nd(rng) * 4) / 4 - 0.3;
    const double base = roc_auc(pos, neg);
    auto pos2 = pos, neg2 = neg;
    for (double& x : pos2) x = sigmoid(x);
    for (double& x : neg2) x = sigmoid(x);
    CHECK(roc_auc(pos2, neg2) == base);
    for (double& x : pos) x = std::exp(3 * x) + 2;
    for (double& x : neg) x = std::exp(3 * x) + 2;
    CHECK(roc_auc(pos, neg) == base);
  }
}

TEST_CASE("phi") {
  CHECK(phi(1.1, 1.0) == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(phi(0.7, 0.7) == 0.0);
  CHECK(phi(0.89, 0.85) == doctest::Approx(4.70588).epsilon(1e-5));
  CHECK_THROWS_AS(phi(0.5, 0.0), Error);
  std::mt19937_64 rng(45);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double x = u(rng), y = u(rng);
    CHECK(phi(x, y) == doctest::Approx(-phi(y, x) * (x / y)).epsilon(1e-12));
  }
}

TEST_CASE("mean and population SD") {
  auto [m, sd] = mean_and_sd(std::vector{1.0, 2.0, 3.0, 4.0});
  CHECK(m == 2.5);
  CHECK(sd == doctest::Approx(std::sqrt(1.25)).epsilon(1e-15));
}

TEST_CASE("karate evaluation shape and determinism") {
  auto g = oracle::karate();
  std::vector<MatrixRecipe> recipes{*parse_recipe("a"), *parse_recipe("sig_log_q"),
                                    *parse_recipe("trunc_log_q")};
  EvalOptions o;
  o.params = {10, 10.0, 16};
  o.folds = 5;
  auto r = evaluate(g, recipes, o, "karate");
  REQUIRE(r.recipes.size() == 3);
  CHECK(r.errors.empty());
  for (const auto& rr : r.recipes) {
    REQUIRE(rr.folds.size() == 5);
    std::vector<double> te;
    for (const auto& f : rr.folds) {
      CHECK(f.train_auc >= 0.0);
      CHECK(f.train_auc <= 1.0);
      CHECK(f.test_auc >= 0.0);
      CHECK(f.test_auc <= 1.0);
      te.push_back(f.test_auc);
    }
    REQUIRE(rr.mean_test.has_value());
    auto [m, sd] = mean_and_sd(te);
    CHECK(*rr.mean_test == m);
    CHECK(*rr.sd_test == sd);
    CHECK(*rr.gen_gap == doctest::Approx(phi(*rr.mean_test, *rr.mean_train)));
    REQUIRE(rr.phi_vs_trunc.has_value());
  }
  CHECK(*r.recipes[2].phi_vs_trunc == 0.0);
  REQUIRE(r.sigmoid_effects.size() == 1);
  CHECK(recipe_token(r.sigmoid_effects[0].plain) == "trunc_log_q");

  auto again = evaluate(g, recipes, o, "karate");
  for (std::size_t i = 0; i < 3; ++i) {
    for (int f = 0; f < 5; ++f) {
      CHECK(again.recipes[i].folds[f].test_auc == r.recipes[i].folds[f].test_auc);
      CHECK(again.recipes[i].folds[f].train_auc == r.recipes[i].folds[f].train_auc);
    }
  }
}

TEST_CASE("a failing recipe is recorded without stopping the others") {
  auto g = oracle::karate();
  EvalOptions o;
  o.params = {5, 1e-310, 4};  // Q overflows to +inf
  o.folds = 3;
  std::vector<MatrixRecipe> recipes{*parse_recipe("j"), *parse_recipe("q")};
  auto r = evaluate(g, recipes, o);
  REQUIRE(r.errors.size() == 3);
  CHECK(r.errors[0].recipe == "q");
  CHECK(r.errors[2].fold == 2);
  CHECK(r.recipes[0].mean_test.has_value());
  CHECK_FALSE(r.recipes[1].mean_test.has_value());
  CHECK(r.recipes[1].folds.empty());
}

TEST_CASE("invalid options are rejected before any fold runs") {
  auto g = oracle::karate();
  std::vector<MatrixRecipe> bad{{Base::kAdjacency, Transform::kTruncLog}};
  EvalOptions o;
  o.params = {5, 1.0, 4};
  CHECK_THROWS_AS(evaluate(g, bad, o), Error);
  std::vector<MatrixRecipe> recipes{*parse_recipe("q")};
  o.params.rank = 40;
  o.folds = 3;
  try {
    evaluate(g, recipes, o);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidArgument);
  }
  o.params.rank = 2;
  o.cap.max_nodes = 10;
  try {
    evaluate(g, recipes, o);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMemoryCap);
    CHECK(std::string(e.what()).find("--mem-cap") != std::string::npos);
  }
}
