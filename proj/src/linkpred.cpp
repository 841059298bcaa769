#include "graphfactor/linkpred.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_set>

#include "graphfactor/error.hpp"
#include "graphfactor/factorization.hpp"
#include "graphfactor/seed.hpp"

namespace graphfactor {

namespace {

std::uint64_t pair_key(const Edge& e) { return (static_cast<std::uint64_t>(e.u) << 32) | e.v; }

bool sorted_contains(std::span<const Edge> sorted, const Edge& e) {
  return std::binary_search(sorted.begin(), sorted.end(), e);
}

std::string edge_str(const Edge& e) {
  return "(" + std::to_string(e.u) + "," + std::to_string(e.v) + ")";
}

}  // namespace

EdgeSubset sample_negatives(const Graph& g, std::size_t count, std::span<const Edge> exclude,
                            std::uint64_t seed) {
  const std::uint64_t n = g.num_nodes();
  std::vector<Edge> excl(exclude.begin(), exclude.end());
  std::sort(excl.begin(), excl.end());
  excl.erase(std::unique(excl.begin(), excl.end()), excl.end());
  std::size_t excluded_non_edges = 0;
  for (const auto& e : excl) {
    if (e.u != e.v && e.u < n && e.v < n && !g.has_edge(e.u, e.v)) ++excluded_non_edges;
  }
  const std::uint64_t all_pairs = n * (n - (n > 0 ? 1 : 0)) / 2;
  const std::uint64_t available = all_pairs - g.num_edges() - excluded_non_edges;
  if (count > available) {
    throw Error(ErrorCode::kInsufficientPairs,
                "requested " + std::to_string(count) + " negative pairs but only " +
                    std::to_string(available) + " non-edges are available");
  }

  EdgeSubset out;
  out.label = EdgeLabel::kNegative;
  std::mt19937_64 gen(seed);
  auto usable = [&](const Edge& e) { return !g.has_edge(e.u, e.v) && !sorted_contains(excl, e); };

  if (2 * count > available) {
    // Dense regime: enumerate every candidate and take a random prefix.
    std::vector<Edge> candidates;
    candidates.reserve(available);
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) {
        if (usable({u, v})) candidates.push_back({u, v});
      }
    }
    for (std::size_t i = 0; i < count; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, candidates.size() - 1);
      std::swap(candidates[i], candidates[pick(gen)]);
    }
    candidates.resize(count);
    out.pairs = std::move(candidates);
  } else {
    std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(n - 1));
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(count * 2);
    while (out.pairs.size() < count) {
      const NodeId a = node(gen);
      const NodeId b = node(gen);
      if (a == b) continue;
      const Edge e = canonical_edge(a, b);
      if (!usable(e) || !chosen.insert(pair_key(e)).second) continue;
      out.pairs.push_back(e);
    }
  }
  std::sort(out.pairs.begin(), out.pairs.end());
  return out;
}

std::vector<FoldSplit> kfold_split(const Graph& g, int k, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::kInvalidArgument, "need at least 2 folds");
  const std::size_t m = g.num_edges();
  if (m < static_cast<std::size_t>(k)) {
    throw Error(ErrorCode::kInsufficientPairs, "graph too small: " + std::to_string(m) +
                                                   " edges for " + std::to_string(k) + " folds");
  }
  std::vector<Edge> shuffled(g.edges().begin(), g.edges().end());
  std::mt19937_64 gen(derive_seed(seed, {0}));
  std::shuffle(shuffled.begin(), shuffled.end(), gen);

  std::vector<FoldSplit> splits;
  const auto folds = static_cast<std::size_t>(k);
  for (std::size_t f = 0; f < folds; ++f) {
    const std::size_t lo = f * m / folds;
    const std::size_t hi = (f + 1) * m / folds;
    FoldSplit s;
    s.fold = static_cast<int>(f);
    s.seed = derive_seed(seed, {f + 1});
    s.test_positive = {std::vector<Edge>(shuffled.begin() + static_cast<std::ptrdiff_t>(lo),
                                         shuffled.begin() + static_cast<std::ptrdiff_t>(hi)),
                       EdgeLabel::kPositive, EdgeOrigin::kTest};
    s.train_positive.origin = EdgeOrigin::kTrain;
    s.train_positive.pairs.reserve(m - (hi - lo));
    s.train_positive.pairs.insert(s.train_positive.pairs.end(), shuffled.begin(),
                                  shuffled.begin() + static_cast<std::ptrdiff_t>(lo));
    s.train_positive.pairs.insert(s.train_positive.pairs.end(),
                                  shuffled.begin() + static_cast<std::ptrdiff_t>(hi), shuffled.end());
    std::sort(s.test_positive.pairs.begin(), s.test_positive.pairs.end());
    std::sort(s.train_positive.pairs.begin(), s.train_positive.pairs.end());

    s.test_negative = sample_negatives(g, s.test_positive.pairs.size(), {}, derive_seed(s.seed, {1}));
    s.test_negative.origin = EdgeOrigin::kTest;
    s.train_negative = sample_negatives(g, s.train_positive.pairs.size(), s.test_negative.pairs,
                                        derive_seed(s.seed, {2}));
    s.train_negative.origin = EdgeOrigin::kTrain;
    check_fold(g, s);
    splits.push_back(std::move(s));
  }
  return splits;
}

void check_fold(const Graph& g, const FoldSplit& s) {
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::kInvalidArgument, "fold " + std::to_string(s.fold) + ": " + what);
  };
  const auto& trp = s.train_positive.pairs;
  const auto& tep = s.test_positive.pairs;
  const auto& trn = s.train_negative.pairs;
  const auto& ten = s.test_negative.pairs;
  for (const auto* set : {&trp, &tep, &trn, &ten}) {
    if (!std::is_sorted(set->begin(), set->end())) fail("subset not sorted");
    if (std::adjacent_find(set->begin(), set->end()) != set->end()) fail("duplicate pair in subset");
    for (const auto& e : *set) {
      if (e.u >= e.v) fail("non-canonical pair " + edge_str(e));
    }
  }
  if (trp.size() + tep.size() != g.num_edges()) fail("positives do not cover E");
  for (const auto& e : tep) {
    if (sorted_contains(trp, e)) fail("test positive " + edge_str(e) + " also in train");
  }
  for (const auto& e : trp) {
    if (!g.has_edge(e.u, e.v)) fail("train positive " + edge_str(e) + " not in E");
  }
  for (const auto& e : tep) {
    if (!g.has_edge(e.u, e.v)) fail("test positive " + edge_str(e) + " not in E");
  }
  for (const auto* set : {&trn, &ten}) {
    for (const auto& e : *set) {
      if (g.has_edge(e.u, e.v)) fail("negative " + edge_str(e) + " is an edge");
    }
  }
  for (const auto& e : ten) {
    if (sorted_contains(trn, e)) fail("negative " + edge_str(e) + " in both train and test");
  }
  if (trn.size() != trp.size() || ten.size() != tep.size()) fail("negative counts differ from positives");
}

std::vector<double> score_pairs(const DenseMatrix& y, std::span<const Edge> pairs) {
  std::vector<double> scores;
  scores.reserve(pairs.size());
  for (const auto& e : pairs) {
    if (e.u >= y.rows() || e.v >= y.rows()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "pair " + edge_str(e) + " out of range for " + std::to_string(y.rows()) + " nodes");
    }
    auto a = y.row(e.u);
    auto b = y.row(e.v);
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    scores.push_back(sigmoid(s));
  }
  return scores;
}

double roc_auc(std::span<const double> positive, std::span<const double> negative) {
  if (positive.empty() || negative.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "ROC AUC needs nonempty positive and negative lists");
  }
  struct Item {
    double score;
    bool positive;
  };
  std::vector<Item> items;
  items.reserve(positive.size() + negative.size());
  for (double s : positive) items.push_back({s, true});
  for (double s : negative) items.push_back({s, false});
  for (const auto& it : items) {
    if (std::isnan(it.score)) throw Error(ErrorCode::kNumeric, "NaN score");
  }
  std::sort(items.begin(), items.end(),
            [](const Item& a, const Item& b) { return a.score < b.score; });

  // Ranks are 1-based; a tie group [i, j) shares rank (i + 1 + j) / 2.
  double positive_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < items.size()) {
    std::size_t j = i + 1;
    while (j < items.size() && items[j].score == items[i].score) ++j;
    const double rank = static_cast<double>(i + 1 + j) / 2.0;
    for (std::size_t t = i; t < j; ++t) {
      if (items[t].positive) positive_rank_sum += rank;
    }
    i = j;
  }
  const double np = static_cast<double>(positive.size());
  const double nn = static_cast<double>(negative.size());
  return (positive_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

double phi(double score, double reference) {
  if (!(reference > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "phi reference score must be positive");
  }
  return (score - reference) / reference * 100.0;
}

std::pair<double, double> mean_and_sd(std::span<const double> xs) {
  if (xs.empty()) return {0.0, 0.0};
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(xs.size()))};
}

EvalReport evaluate(const Graph& g, std::span<const MatrixRecipe> recipes,
                    const EvalOptions& options, const std::string& dataset) {
  options.params.validate(g.num_nodes());
  check_dense_allocation(g.num_nodes(), options.cap);
  for (const auto& r : recipes) {
    if (!r.valid()) throw Error(ErrorCode::kInvalidArgument, "invalid recipe");
  }

  EvalReport report;
  report.dataset = dataset;
  report.num_nodes = g.num_nodes();
  report.num_edges = g.num_edges();
  report.options = options;
  for (const auto& r : recipes) report.recipes.push_back({r, {}, {}, {}, {}, {}, {}, {}});

  const auto splits = kfold_split(g, options.folds, options.seed);
  for (const auto& split : splits) {
    const Graph train = subgraph_from_edges(g, split.train_positive);
    std::optional<DenseMatrix> base_a, base_j, base_q;
    auto base = [&](Base b) -> const DenseMatrix& {
      switch (b) {
        case Base::kAdjacency:
          if (!base_a) base_a = to_dense(adjacency(train));
          return *base_a;
        case Base::kJointJ:
          if (!base_j) base_j = joint_j(train, options.params, options.j_index, options.cap);
          return *base_j;
        case Base::kQ:
          break;
      }
      if (!base_q) base_q = deepwalk_q(train, options.params, options.cap);
      return *base_q;
    };

    const SvdOptions svd_options{options.params.rank, options.oversample, options.power_iters,
                                 derive_seed(split.seed, {3})};
    for (std::size_t ri = 0; ri < recipes.size(); ++ri) {
      try {
        const DenseMatrix m = apply_recipe(base(recipes[ri].base), recipes[ri]);
        const DenseMatrix y = truncated_svd(m, svd_options).embedding;
        FoldScore fs;
        fs.fold = split.fold;
        fs.train_auc = roc_auc(score_pairs(y, split.train_positive.pairs),
                               score_pairs(y, split.train_negative.pairs));
        fs.test_auc = roc_auc(score_pairs(y, split.test_positive.pairs),
                              score_pairs(y, split.test_negative.pairs));
        report.recipes[ri].folds.push_back(fs);
      } catch (const Error& e) {
        report.errors.push_back({recipe_token(recipes[ri]), split.fold, e.what()});
      }
    }
  }

  for (auto& rr : report.recipes) {
    if (rr.folds.size() != splits.size()) continue;
    std::vector<double> train, test;
    for (const auto& f : rr.folds) {
      train.push_back(f.train_auc);
      test.push_back(f.test_auc);
    }
    auto [mtr, sdtr] = mean_and_sd(train);
    auto [mte, sdte] = mean_and_sd(test);
    rr.mean_train = mtr;
    rr.sd_train = sdtr;
    rr.mean_test = mte;
    rr.sd_test = sdte;
    if (mtr > 0.0) rr.gen_gap = phi(mte, mtr);
  }

  const MatrixRecipe trunc{Base::kQ, Transform::kTruncLog};
  const RecipeResult* reference = nullptr;
  for (const auto& rr : report.recipes) {
    if (rr.recipe == trunc && rr.mean_test && *rr.mean_test > 0.0) reference = &rr;
  }
  if (reference) {
    for (auto& rr : report.recipes) {
      if (rr.mean_test) rr.phi_vs_trunc = phi(*rr.mean_test, *reference->mean_test);
    }
  }

  for (const auto& plain : report.recipes) {
    auto counterpart = sigmoid_counterpart(plain.recipe);
    if (!counterpart || !plain.mean_test || !(*plain.mean_test > 0.0)) continue;
    for (const auto& sig : report.recipes) {
      if (sig.recipe == *counterpart && sig.mean_test) {
        report.sigmoid_effects.push_back(
            {plain.recipe, sig.recipe, phi(*sig.mean_test, *plain.mean_test)});
      }
    }
  }
  return report;
}

}  // namespace graphfactor
