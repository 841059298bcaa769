#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "graphfactor/dense_matrix.hpp"
#include "graphfactor/linkpred.hpp"
#include "graphfactor/walk_oracle.hpp"

namespace graphfactor {

std::string j_index_name(JIndex index);

// {dataset, params, recipes:[{name, folds:[{train_auc,test_auc}], mean, sd,
// phi_vs_trunc, gen_gap}], sigmoid_effect, errors}; pretty-printed,
// deterministic.
std::string report_json(const EvalReport& report);

// Three tables: test AUC with phi vs trunc_log_q, sigmoid effect,
// generalization gap.
void write_report_markdown(const EvalReport& report, std::ostream& out);

// One row per recipe with means, SDs and the three phi columns.
void write_report_csv(const EvalReport& report, std::ostream& out);

void write_convergence_csv(const ConvergenceStudy& study, std::ostream& out);
void write_convergence_markdown(const ConvergenceStudy& study, std::ostream& out);

// Binary 8-bit PGM; values are mapped linearly from [lo, hi] to [0, 255].
void write_pgm(const DenseMatrix& m, double lo, double hi, std::ostream& out);
void write_pgm(const DenseMatrix& m, double lo, double hi, const std::filesystem::path& path);

// Aligned display panels: ground truth with -inf replaced by
// (min finite - 1), the reconstruction, and their difference, sharing one
// min-max scale.
struct HeatmapPanels {
  DenseMatrix ground_truth;
  DenseMatrix reconstruction;
  DenseMatrix difference;
  double lo = 0.0;
  double hi = 0.0;
};

HeatmapPanels make_heatmap_panels(const DenseMatrix& ground_truth, const DenseMatrix& reconstruction);

// Population variance of `values` over entries where reference < threshold
// (low) and where reference >= threshold (high).
struct SplitVariance {
  double low = 0.0;
  double high = 0.0;
  std::size_t low_count = 0;
  std::size_t high_count = 0;
};

SplitVariance variance_by_reference(const DenseMatrix& values, const DenseMatrix& reference,
                                    double threshold);

}  // namespace graphfactor
