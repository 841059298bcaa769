#include "graphfactor/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>

#include "graphfactor/error.hpp"

namespace graphfactor {

namespace {

using nlohmann::ordered_json;

ordered_json optional_number(const std::optional<double>& x) {
  return x ? ordered_json(*x) : ordered_json(nullptr);
}

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string signed_percent(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%+.2f%%", x);
  return buf;
}

std::string cell(const std::optional<double>& x, int digits) {
  return x ? fixed(*x, digits) : "n/a";
}

std::optional<double> sigmoid_phi_for(const EvalReport& report, const MatrixRecipe& r) {
  for (const auto& e : report.sigmoid_effects) {
    if (e.plain == r) return e.phi;
  }
  return std::nullopt;
}

}  // namespace

std::string j_index_name(JIndex index) {
  return index == JIndex::kCanonical ? "canonical" : "paper-literal";
}

std::string report_json(const EvalReport& report) {
  const auto& o = report.options;
  ordered_json j;
  j["dataset"] = report.dataset;
  j["graph"] = {{"nodes", report.num_nodes}, {"edges", report.num_edges}};
  j["params"] = {{"T", o.params.window},          {"b", o.params.negatives},
                 {"dim", o.params.rank},          {"folds", o.folds},
                 {"seed", o.seed},                {"oversample", o.oversample},
                 {"power_iters", o.power_iters},  {"j_index", j_index_name(o.j_index)},
                 {"mem_cap", o.cap.max_nodes},    {"negatives_per_positive", 1}};
  ordered_json recipes = ordered_json::array();
  for (const auto& rr : report.recipes) {
    ordered_json folds = ordered_json::array();
    for (const auto& f : rr.folds) {
      folds.push_back({{"fold", f.fold}, {"train_auc", f.train_auc}, {"test_auc", f.test_auc}});
    }
    recipes.push_back({{"name", recipe_token(rr.recipe)},
                       {"folds", folds},
                       {"mean", {{"train", optional_number(rr.mean_train)},
                                 {"test", optional_number(rr.mean_test)}}},
                       {"sd", {{"train", optional_number(rr.sd_train)},
                               {"test", optional_number(rr.sd_test)}}},
                       {"phi_vs_trunc", optional_number(rr.phi_vs_trunc)},
                       {"gen_gap", optional_number(rr.gen_gap)}});
  }
  j["recipes"] = recipes;
  ordered_json effects = ordered_json::array();
  for (const auto& e : report.sigmoid_effects) {
    effects.push_back({{"from", recipe_token(e.plain)},
                       {"to", recipe_token(e.with_sigmoid)},
                       {"phi", e.phi}});
  }
  j["sigmoid_effect"] = effects;
  ordered_json errors = ordered_json::array();
  for (const auto& e : report.errors) {
    errors.push_back({{"recipe", e.recipe}, {"fold", e.fold}, {"message", e.message}});
  }
  j["errors"] = errors;
  return j.dump(2) + "\n";
}

void write_report_markdown(const EvalReport& report, std::ostream& out) {
  const auto& p = report.options.params;
  out << "# Link prediction: " << (report.dataset.empty() ? "graph" : report.dataset) << "\n\n";
  out << report.num_nodes << " nodes, " << report.num_edges << " edges; T=" << p.window
      << ", b=" << p.negatives << ", d=" << p.rank << ", " << report.options.folds
      << "-fold CV, seed " << report.options.seed << ", J index "
      << j_index_name(report.options.j_index) << ". Edges are read as undirected; directed "
      << "inputs are symmetrized.\n\n";

  out << "## Mean test ROC AUC\n\n";
  out << "| matrix | test AUC (SD) | phi(M, trunc_log_q) |\n|---|---|---|\n";
  for (const auto& rr : report.recipes) {
    out << "| " << recipe_token(rr.recipe) << " | " << cell(rr.mean_test, 4) << " ("
        << cell(rr.sd_test, 4) << ") | "
        << (rr.phi_vs_trunc ? signed_percent(*rr.phi_vs_trunc) : "n/a") << " |\n";
  }

  out << "\n## Effect of the sigmoid\n\n";
  out << "| matrix | M -> sigma(M) | phi(sigma(M), M) |\n|---|---|---|\n";
  for (const auto& e : report.sigmoid_effects) {
    std::optional<double> from, to;
    for (const auto& rr : report.recipes) {
      if (rr.recipe == e.plain) from = rr.mean_test;
      if (rr.recipe == e.with_sigmoid) to = rr.mean_test;
    }
    out << "| " << recipe_token(e.plain) << " | " << cell(from, 4) << " -> " << cell(to, 4)
        << " (" << recipe_token(e.with_sigmoid) << ") | " << signed_percent(e.phi) << " |\n";
  }

  out << "\n## Generalization gap\n\n";
  out << "| matrix | test -> train | phi(test, train) |\n|---|---|---|\n";
  for (const auto& rr : report.recipes) {
    out << "| " << recipe_token(rr.recipe) << " | " << cell(rr.mean_test, 4) << " -> "
        << cell(rr.mean_train, 4) << " | "
        << (rr.gen_gap ? signed_percent(*rr.gen_gap) : "n/a") << " |\n";
  }

  if (!report.errors.empty()) {
    out << "\n## Errors\n\n";
    for (const auto& e : report.errors) {
      out << "- " << e.recipe << ", fold " << e.fold << ": " << e.message << "\n";
    }
  }
}

void write_report_csv(const EvalReport& report, std::ostream& out) {
  auto num = [](const std::optional<double>& x) { return x ? fixed(*x, 6) : std::string(); };
  out << "recipe,mean_train_auc,sd_train_auc,mean_test_auc,sd_test_auc,phi_vs_trunc,"
         "gen_gap,sigmoid_phi\n";
  for (const auto& rr : report.recipes) {
    out << recipe_token(rr.recipe) << ',' << num(rr.mean_train) << ',' << num(rr.sd_train) << ','
        << num(rr.mean_test) << ',' << num(rr.sd_test) << ',' << num(rr.phi_vs_trunc) << ','
        << num(rr.gen_gap) << ',' << num(sigmoid_phi_for(report, rr.recipe)) << '\n';
  }
}

void write_convergence_csv(const ConvergenceStudy& study, std::ostream& out) {
  out << "# seed=" << study.seed << " walk_length=" << study.walk_length
      << " T=" << study.params.window << " b=" << study.params.negatives
      << " j_index=" << j_index_name(study.j_index) << "\n";
  out << "walks_per_node,joint_rel_error,max_marginal_error,max_q_rel_error,observed_pairs\n";
  for (const auto& r : study.rows) {
    out << r.walks_per_node << ',' << fixed(r.joint_rel_error, 8) << ','
        << fixed(r.max_marginal_error, 8) << ',' << fixed(r.max_q_rel_error, 8) << ','
        << r.observed_pairs << '\n';
  }
}

void write_convergence_markdown(const ConvergenceStudy& study, std::ostream& out) {
  out << "# Walk-oracle convergence\n\n";
  out << "seed " << study.seed << ", walk length " << study.walk_length << ", T="
      << study.params.window << ", b=" << study.params.negatives << ", J index "
      << j_index_name(study.j_index) << "\n\n";
  out << "| L | rel. Frobenius error of J | max marginal error | max rel. error exp(PMI) vs Q |"
         "\n|---|---|---|---|\n";
  for (const auto& r : study.rows) {
    out << "| " << r.walks_per_node << " | " << fixed(r.joint_rel_error, 6) << " | "
        << fixed(r.max_marginal_error, 6) << " | " << fixed(r.max_q_rel_error, 6) << " |\n";
  }
}

void write_pgm(const DenseMatrix& m, double lo, double hi, std::ostream& out) {
  out << "P5\n" << m.cols() << ' ' << m.rows() << "\n255\n";
  const double span = hi - lo;
  std::string bytes(m.size(), '\0');
  for (std::size_t i = 0; i < m.size(); ++i) {
    double t = span > 0.0 ? (m.values()[i] - lo) / span : 0.5;
    t = std::clamp(t, 0.0, 1.0);
    bytes[i] = static_cast<char>(static_cast<unsigned char>(std::lround(t * 255.0)));
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

void write_pgm(const DenseMatrix& m, double lo, double hi, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  write_pgm(m, lo, hi, out);
}

HeatmapPanels make_heatmap_panels(const DenseMatrix& ground_truth,
                                  const DenseMatrix& reconstruction) {
  if (ground_truth.rows() != reconstruction.rows() || ground_truth.cols() != reconstruction.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "heatmap panels must share a shape");
  }
  HeatmapPanels p;
  p.ground_truth = ground_truth;
  double min_finite = std::numeric_limits<double>::infinity();
  for (double x : ground_truth.values()) {
    if (std::isfinite(x)) min_finite = std::min(min_finite, x);
  }
  const double floor = std::isfinite(min_finite) ? min_finite - 1.0 : 0.0;
  for (double& x : p.ground_truth.values()) {
    if (!std::isfinite(x)) x = floor;
  }
  p.reconstruction = reconstruction;
  p.difference = p.ground_truth;
  for (std::size_t i = 0; i < p.difference.size(); ++i) {
    p.difference.values()[i] -= reconstruction.values()[i];
  }
  p.lo = std::numeric_limits<double>::infinity();
  p.hi = -std::numeric_limits<double>::infinity();
  for (const auto* m : {&p.ground_truth, &p.reconstruction, &p.difference}) {
    for (double x : m->values()) {
      p.lo = std::min(p.lo, x);
      p.hi = std::max(p.hi, x);
    }
  }
  if (p.ground_truth.size() == 0) p.lo = p.hi = 0.0;
  return p;
}

SplitVariance variance_by_reference(const DenseMatrix& values, const DenseMatrix& reference,
                                    double threshold) {
  if (values.rows() != reference.rows() || values.cols() != reference.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "variance split needs matching shapes");
  }
  double sum[2] = {0, 0}, sq[2] = {0, 0};
  std::size_t cnt[2] = {0, 0};
  auto bucket = [&](std::size_t i) { return reference.values()[i] < threshold ? 0 : 1; };
  for (std::size_t i = 0; i < values.size(); ++i) {
    sum[bucket(i)] += values.values()[i];
    ++cnt[bucket(i)];
  }
  double mean[2];
  for (int b = 0; b < 2; ++b) mean[b] = cnt[b] ? sum[b] / static_cast<double>(cnt[b]) : 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double dev = values.values()[i] - mean[bucket(i)];
    sq[bucket(i)] += dev * dev;
  }
  auto var = [&](int b) { return cnt[b] ? sq[b] / static_cast<double>(cnt[b]) : 0.0; };
  return {var(0), var(1), cnt[0], cnt[1]};
}

}  // namespace graphfactor
