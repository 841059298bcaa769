#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "graphfactor/dense_matrix.hpp"

namespace graphfactor {

enum class Base { kAdjacency, kJointJ, kQ };

enum class Transform {
  kIdentity,
  kTruncLog,       // log(max(x, 1))
  kSigmoidLog,     // sigma(log x) = x / (1 + x)
  kExpLog,         // exp(log x) = x, with 0 -> 0
  kSigmoidExpLog,  // sigma(exp(log x)) = sigma(x)
  kSigmoid,        // 1 / (1 + e^-x)
};

// Which co-occurrence statistic to build and how to transform it before
// factorization. The log-family transforms only make sense for Q.
struct MatrixRecipe {
  Base base = Base::kQ;
  Transform transform = Transform::kIdentity;

  bool valid() const;
  bool operator==(const MatrixRecipe&) const = default;
};

double sigmoid(double x);

DenseMatrix apply_recipe(const DenseMatrix& m, const MatrixRecipe& recipe);
void apply_recipe_in_place(DenseMatrix& m, const MatrixRecipe& recipe);

// A, sigma(A), J, sigma(J), Q, sigma(Q), log max(Q,1), sigma(log Q).
std::vector<MatrixRecipe> recipe_menu();

// CLI token of a menu recipe, e.g. "sig_log_q"; other combinations get a
// descriptive name such as "sig(q)" that parse_recipe does not accept.
std::string recipe_token(const MatrixRecipe& recipe);
std::optional<MatrixRecipe> parse_recipe(std::string_view token);
std::string valid_recipe_tokens();

// The recipe that applies the sigmoid to the same statistic; for
// trunc_log_q that is sigma of the untruncated log Q.
std::optional<MatrixRecipe> sigmoid_counterpart(const MatrixRecipe& recipe);

}  // namespace graphfactor
