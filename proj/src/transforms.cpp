#include "graphfactor/transforms.hpp"

#include <array>
#include <cmath>
#include <cstdint>

#include "graphfactor/error.hpp"

namespace graphfactor {

namespace {

struct MenuEntry {
  std::string_view token;
  MatrixRecipe recipe;
};

constexpr std::array<MenuEntry, 8> kMenu{{
    {"a", {Base::kAdjacency, Transform::kIdentity}},
    {"sig_a", {Base::kAdjacency, Transform::kSigmoid}},
    {"j", {Base::kJointJ, Transform::kIdentity}},
    {"sig_j", {Base::kJointJ, Transform::kSigmoid}},
    {"q", {Base::kQ, Transform::kExpLog}},
    {"sig_q", {Base::kQ, Transform::kSigmoidExpLog}},
    {"trunc_log_q", {Base::kQ, Transform::kTruncLog}},
    {"sig_log_q", {Base::kQ, Transform::kSigmoidLog}},
}};

bool log_family(Transform t) {
  return t == Transform::kTruncLog || t == Transform::kSigmoidLog || t == Transform::kExpLog ||
         t == Transform::kSigmoidExpLog;
}

double apply_scalar(double x, Transform t) {
  switch (t) {
    case Transform::kIdentity:
      return x;
    case Transform::kTruncLog:
      return x > 1.0 ? std::log(x) : 0.0;
    case Transform::kSigmoidLog:
      return std::isinf(x) ? 1.0 : x / (1.0 + x);
    case Transform::kExpLog:
      return x;
    case Transform::kSigmoidExpLog:
    case Transform::kSigmoid:
      return sigmoid(x);
  }
  return x;
}

}  // namespace

bool MatrixRecipe::valid() const { return !log_family(transform) || base == Base::kQ; }

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void apply_recipe_in_place(DenseMatrix& m, const MatrixRecipe& recipe) {
  if (!recipe.valid()) {
    throw Error(ErrorCode::kInvalidArgument, "log-family transforms require base Q");
  }
  if (recipe.base == Base::kQ) {
    for (double x : m.values()) {
      if (x < 0.0) {
        throw Error(ErrorCode::kNumeric, "negative entry in a Q-based matrix");
      }
    }
  }
  if (recipe.transform == Transform::kIdentity || recipe.transform == Transform::kExpLog) return;
  auto v = m.values();
  const auto size = static_cast<std::int64_t>(v.size());
  const Transform t = recipe.transform;
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < size; ++i) v[i] = apply_scalar(v[i], t);
}

DenseMatrix apply_recipe(const DenseMatrix& m, const MatrixRecipe& recipe) {
  DenseMatrix out = m;
  apply_recipe_in_place(out, recipe);
  return out;
}

std::vector<MatrixRecipe> recipe_menu() {
  std::vector<MatrixRecipe> menu;
  for (const auto& e : kMenu) menu.push_back(e.recipe);
  return menu;
}

std::string recipe_token(const MatrixRecipe& recipe) {
  for (const auto& e : kMenu) {
    if (e.recipe == recipe) return std::string(e.token);
  }
  static constexpr std::array<std::string_view, 3> kBase{"a", "j", "q"};
  static constexpr std::array<std::string_view, 6> kTransform{
      "identity", "trunc_log", "sig_log", "exp_log", "sig_exp_log", "sig"};
  return std::string(kTransform[static_cast<int>(recipe.transform)]) + "(" +
         std::string(kBase[static_cast<int>(recipe.base)]) + ")";
}

std::optional<MatrixRecipe> parse_recipe(std::string_view token) {
  for (const auto& e : kMenu) {
    if (e.token == token) return e.recipe;
  }
  return std::nullopt;
}

std::string valid_recipe_tokens() {
  std::string out;
  for (const auto& e : kMenu) {
    if (!out.empty()) out += ", ";
    out += e.token;
  }
  return out;
}

std::optional<MatrixRecipe> sigmoid_counterpart(const MatrixRecipe& recipe) {
  switch (recipe.transform) {
    case Transform::kIdentity:
      if (recipe.base == Base::kQ) return MatrixRecipe{Base::kQ, Transform::kSigmoid};
      return MatrixRecipe{recipe.base, Transform::kSigmoid};
    case Transform::kExpLog:
      return MatrixRecipe{Base::kQ, Transform::kSigmoidExpLog};
    case Transform::kTruncLog:
      return MatrixRecipe{Base::kQ, Transform::kSigmoidLog};
    default:
      return std::nullopt;
  }
}

}  // namespace graphfactor
