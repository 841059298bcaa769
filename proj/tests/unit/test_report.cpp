#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <limits>
#include <sstream>

#include "graphfactor/factorization.hpp"
#include "graphfactor/report.hpp"
#include "unit/oracles.hpp"

using namespace graphfactor;

namespace {

EvalReport small_report() {
  std::vector<MatrixRecipe> recipes{*parse_recipe("j"), *parse_recipe("sig_j"),
                                    *parse_recipe("trunc_log_q"), *parse_recipe("sig_log_q")};
  EvalOptions o;
  o.params = {10, 10.0, 8};
  o.folds = 3;
  return evaluate(oracle::karate(), recipes, o, "karate");
}

}  // namespace

TEST_CASE("report JSON schema") {
  const auto r = small_report();
  auto j = nlohmann::json::parse(report_json(r));
  CHECK(j["dataset"] == "karate");
  CHECK(j["graph"]["nodes"] == 34);
  CHECK(j["params"]["T"] == 10);
  CHECK(j["params"]["j_index"] == "canonical");
  REQUIRE(j["recipes"].size() == 4);
  CHECK(j["recipes"][0]["name"] == "j");
  CHECK(j["recipes"][0]["folds"].size() == 3);
  CHECK(j["recipes"][0]["folds"][0].contains("train_auc"));
  CHECK(j["recipes"][0]["mean"].contains("test"));
  CHECK(j["recipes"][0]["sd"].contains("train"));
  CHECK(j["recipes"][0].contains("phi_vs_trunc"));
  CHECK(j["recipes"][0].contains("gen_gap"));
  CHECK(j["sigmoid_effect"].size() == 2);
  CHECK(j["errors"].empty());
  CHECK(report_json(r) == report_json(small_report()));
}

TEST_CASE("markdown tables") {
  std::ostringstream md;
  write_report_markdown(small_report(), md);
  const auto s = md.str();
  CHECK(s.find("## Mean test ROC AUC") != std::string::npos);
  CHECK(s.find("## Effect of the sigmoid") != std::string::npos);
  CHECK(s.find("## Generalization gap") != std::string::npos);
  CHECK(s.find("| j |") < s.find("| sig_j |"));
  CHECK(s.find("| trunc_log_q |") < s.find("| sig_log_q |"));
}

TEST_CASE("CSV table") {
  std::ostringstream csv;
  write_report_csv(small_report(), csv);
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  CHECK(line ==
        "recipe,mean_train_auc,sd_train_auc,mean_test_auc,sd_test_auc,phi_vs_trunc,gen_gap,"
        "sigmoid_phi");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 4);
}

TEST_CASE("convergence CSV records the seed") {
  const std::vector<int> ls{10, 100};
  auto study = run_convergence_study(oracle::complete_graph(3), {3, 1.0, 1}, ls, 20, 77);
  std::ostringstream out;
  write_convergence_csv(study, out);
  CHECK(out.str().rfind("# seed=77 ", 0) == 0);
  CHECK(out.str().find("max_marginal_error") != std::string::npos);
}

TEST_CASE("PGM format") {
  DenseMatrix m(2, 3);
  m(0, 0) = -1.0;
  m(1, 2) = 1.0;
  std::ostringstream out;
  write_pgm(m, -1.0, 1.0, out);
  const auto s = out.str();
  const std::string header = "P5\n3 2\n255\n";
  REQUIRE(s.size() == header.size() + 6);
  CHECK(s.substr(0, header.size()) == header);
  CHECK(static_cast<unsigned char>(s[header.size()]) == 0);
  CHECK(static_cast<unsigned char>(s[header.size() + 1]) == 128);
  CHECK(static_cast<unsigned char>(s[header.size() + 5]) == 255);
}

TEST_CASE("heatmap panels clamp -inf and share one scale") {
  DenseMatrix truth(2, 2);
  truth(0, 0) = -std::numeric_limits<double>::infinity();
  truth(0, 1) = -2.0;
  truth(1, 0) = 1.0;
  truth(1, 1) = 3.0;
  DenseMatrix recon(2, 2, 0.5);
  auto p = make_heatmap_panels(truth, recon);
  CHECK(p.ground_truth(0, 0) == -3.0);
  CHECK(p.difference(1, 1) == 2.5);
  CHECK(p.lo == -3.5);
  CHECK(p.hi == 3.0);
}

TEST_CASE("difference panel of an exact reconstruction is flat") {
  std::mt19937_64 rng(51);
  auto b = oracle::random_matrix(10, 10, rng);
  auto m = oracle::naive_multiply(b, transpose(b));
  auto e = truncated_svd(m, {10, 0, 2, 0});
  auto p = make_heatmap_panels(m, reconstruct(e.embedding));
  for (double x : p.difference.values()) CHECK(std::abs(x) <= 1e-9 * (p.hi - p.lo));
}

TEST_CASE("variance split") {
  DenseMatrix v(1, 4), ref(1, 4);
  v(0, 0) = 1;
  v(0, 1) = 3;
  v(0, 2) = 10;
  v(0, 3) = 20;
  ref(0, 0) = 0.1;
  ref(0, 1) = 0.5;
  ref(0, 2) = 1.0;
  ref(0, 3) = 4.0;
  auto s = variance_by_reference(v, ref, 1.0);
  CHECK(s.low == 1.0);
  CHECK(s.high == 25.0);
  CHECK(s.low_count == 2);
  CHECK(s.high_count == 2);
}
