#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graphfactor/dense_matrix.hpp"
#include "graphfactor/graph.hpp"
#include "graphfactor/rw_matrices.hpp"
#include "graphfactor/transforms.hpp"

namespace graphfactor {

struct FoldSplit {
  int fold = 0;
  std::uint64_t seed = 0;
  EdgeSubset train_positive;
  EdgeSubset test_positive;
  EdgeSubset train_negative;
  EdgeSubset test_negative;
};

// Shuffles E, cuts it into k near-equal folds (fold i is the test set of
// split i) and samples 1:1 negatives per side, disjoint from E and from
// each other.
std::vector<FoldSplit> kfold_split(const Graph& g, int k, std::uint64_t seed);

// Throws kInvalidArgument if any split invariant is violated.
void check_fold(const Graph& g, const FoldSplit& split);

// Uniform non-edges (u < v) outside E and outside `exclude` (sorted,
// canonical), without replacement.
EdgeSubset sample_negatives(const Graph& g, std::size_t count, std::span<const Edge> exclude,
                            std::uint64_t seed);

// sigma(y_u . y_v) per pair.
std::vector<double> score_pairs(const DenseMatrix& y, std::span<const Edge> pairs);

// Mann-Whitney AUC with ties counted as 1/2, via average ranks.
double roc_auc(std::span<const double> positive, std::span<const double> negative);

// Signed percent difference (m - m') / m' * 100.
double phi(double score, double reference);

struct EvalOptions {
  HyperParams params;
  int folds = 5;
  std::uint64_t seed = 42;
  int oversample = 10;
  int power_iters = 7;
  JIndex j_index = JIndex::kCanonical;
  MemoryCap cap;
};

struct FoldScore {
  int fold = 0;
  double train_auc = 0.0;
  double test_auc = 0.0;
};

struct RecipeResult {
  MatrixRecipe recipe;
  std::vector<FoldScore> folds;
  // Present only when every fold succeeded.
  std::optional<double> mean_train, mean_test, sd_train, sd_test;
  std::optional<double> phi_vs_trunc;  // phi(M, trunc_log_q) on mean test AUC
  std::optional<double> gen_gap;       // phi(test, train) on means
};

struct SigmoidEffect {
  MatrixRecipe plain;
  MatrixRecipe with_sigmoid;
  double phi = 0.0;  // phi(sigma(M), M) on mean test AUC
};

struct EvalError {
  std::string recipe;
  int fold = 0;
  std::string message;
};

struct EvalReport {
  std::string dataset;
  std::size_t num_nodes = 0;
  std::size_t num_edges = 0;
  EvalOptions options;
  std::vector<RecipeResult> recipes;
  std::vector<SigmoidEffect> sigmoid_effects;
  std::vector<EvalError> errors;
};

// Mean and population standard deviation.
std::pair<double, double> mean_and_sd(std::span<const double> xs);

// Fold-major, recipe-minor. Co-occurrence matrices come from each fold's
// training subgraph. A recipe that throws is recorded in errors and the
// remaining recipes continue.
EvalReport evaluate(const Graph& g, std::span<const MatrixRecipe> recipes,
                    const EvalOptions& options, const std::string& dataset = "");

}  // namespace graphfactor
