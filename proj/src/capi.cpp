#include "graphfactor/graphfactor.h"

#include <array>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <new>
#include <string>

#include "graphfactor/error.hpp"
#include "graphfactor/factorization.hpp"
#include "graphfactor/graph.hpp"
#include "graphfactor/linkpred.hpp"
#include "graphfactor/parallel.hpp"
#include "graphfactor/report.hpp"
#include "graphfactor/rw_matrices.hpp"
#include "graphfactor/transforms.hpp"
#include "graphfactor/walk_oracle.hpp"

namespace gf = graphfactor;

struct gf_graph {
  gf::LoadedGraph loaded;
};

struct gf_matrix {
  gf::DenseMatrix m;
};

struct gf_embedding {
  gf::EmbeddingSet svd;
};

struct gf_report {
  gf::EvalReport report;
};

namespace {

thread_local std::string g_last_error;

gf_status to_status(gf::ErrorCode code) {
  switch (code) {
    case gf::ErrorCode::kInvalidArgument: return GF_ERR_INVALID_ARGUMENT;
    case gf::ErrorCode::kIo: return GF_ERR_IO;
    case gf::ErrorCode::kParse: return GF_ERR_PARSE;
    case gf::ErrorCode::kEmptyGraph: return GF_ERR_EMPTY_GRAPH;
    case gf::ErrorCode::kDimensionMismatch: return GF_ERR_DIMENSION;
    case gf::ErrorCode::kMemoryCap: return GF_ERR_MEMORY_CAP;
    case gf::ErrorCode::kZeroDegree: return GF_ERR_ZERO_DEGREE;
    case gf::ErrorCode::kInsufficientPairs: return GF_ERR_INSUFFICIENT_PAIRS;
    case gf::ErrorCode::kNumeric: return GF_ERR_NUMERIC;
  }
  return GF_ERR_INTERNAL;
}

gf_status fail(gf_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename F>
gf_status guarded(F&& body) {
  try {
    body();
    return GF_OK;
  } catch (const gf::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(GF_ERR_OUT_OF_MEMORY, "out of memory");
  } catch (const std::exception& e) {
    return fail(GF_ERR_INTERNAL, e.what());
  }
}

void require(const void* p, const char* what) {
  if (!p) throw gf::Error(gf::ErrorCode::kInvalidArgument, std::string(what) + " is NULL");
}

gf::HyperParams hyper(const gf_params& p) { return {p.window, p.negatives, p.rank}; }

gf::MemoryCap cap(const gf_params& p) { return {static_cast<std::size_t>(p.mem_cap_nodes)}; }

gf::JIndex j_index(const gf_params& p) {
  if (p.j_index == GF_J_CANONICAL) return gf::JIndex::kCanonical;
  if (p.j_index == GF_J_PAPER_LITERAL) return gf::JIndex::kPaperLiteral;
  throw gf::Error(gf::ErrorCode::kInvalidArgument, "unknown J index variant");
}

gf::MatrixRecipe recipe_or_throw(const char* token) {
  require(token, "recipe");
  auto r = gf::parse_recipe(token);
  if (!r) {
    throw gf::Error(gf::ErrorCode::kInvalidArgument, std::string("unknown recipe '") + token +
                                                         "'; valid: " + gf::valid_recipe_tokens());
  }
  return *r;
}

gf::DenseMatrix base_matrix(const gf::Graph& g, gf::Base base, const gf_params& p) {
  switch (base) {
    case gf::Base::kAdjacency:
      gf::check_dense_allocation(g.num_nodes(), cap(p));
      return gf::to_dense(gf::adjacency(g));
    case gf::Base::kJointJ:
      return gf::joint_j(g, hyper(p), j_index(p), cap(p));
    case gf::Base::kQ:
      break;
  }
  return gf::deepwalk_q(g, hyper(p), cap(p));
}

std::ofstream open_out(const char* path, std::ios::openmode mode = std::ios::out) {
  require(path, "path");
  std::ofstream out(path, mode);
  if (!out) throw gf::Error(gf::ErrorCode::kIo, std::string("cannot write ") + path);
  return out;
}

}  // namespace

extern "C" {

const char* gf_version(void) { return "1.0.0"; }

const char* gf_last_error(void) { return g_last_error.c_str(); }

const char* gf_status_string(gf_status status) {
  switch (status) {
    case GF_OK: return "ok";
    case GF_ERR_INVALID_ARGUMENT: return "invalid argument";
    case GF_ERR_IO: return "i/o error";
    case GF_ERR_PARSE: return "parse error";
    case GF_ERR_EMPTY_GRAPH: return "empty graph";
    case GF_ERR_DIMENSION: return "dimension mismatch";
    case GF_ERR_MEMORY_CAP: return "dense memory cap exceeded";
    case GF_ERR_ZERO_DEGREE: return "zero-degree node";
    case GF_ERR_INSUFFICIENT_PAIRS: return "insufficient pairs";
    case GF_ERR_NUMERIC: return "numeric error";
    case GF_ERR_OUT_OF_MEMORY: return "out of memory";
    case GF_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void gf_set_threads(int threads) { gf::set_thread_count(threads); }

void gf_params_init(gf_params* params) {
  if (!params) return;
  params->window = 10;
  params->negatives = 10.0;
  params->rank = 128;
  params->folds = 5;
  params->seed = 42;
  params->oversample = 10;
  params->power_iters = 7;
  params->j_index = GF_J_CANONICAL;
  params->mem_cap_nodes = 20000;
}

gf_status gf_params_apply_preset(gf_params* params, const char* preset) {
  return guarded([&] {
    require(params, "params");
    require(preset, "preset");
    const std::string name = preset;
    if (name == "paper-main") {
      params->window = 10;
      params->negatives = 10.0;
      params->rank = 128;
      params->folds = 5;
    } else if (name == "karate-fig1") {
      params->window = 5;
      params->negatives = 1.0;
      params->rank = 5;
    } else {
      throw gf::Error(gf::ErrorCode::kInvalidArgument,
                      "unknown preset '" + name + "'; valid: paper-main, karate-fig1");
    }
  });
}

gf_status gf_graph_load(const char* path, gf_graph** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new gf_graph{gf::load_edge_list(path)};
  });
}

gf_status gf_graph_from_edges(size_t num_nodes, const uint32_t* endpoints, size_t num_edges,
                              gf_graph** out) {
  return guarded([&] {
    require(out, "out");
    if (num_edges) require(endpoints, "endpoints");
    std::vector<gf::Edge> edges(num_edges);
    for (size_t i = 0; i < num_edges; ++i) edges[i] = {endpoints[2 * i], endpoints[2 * i + 1]};
    gf::LoadedGraph loaded;
    loaded.graph = gf::Graph::from_edges(num_nodes, std::move(edges));
    loaded.external_ids.resize(num_nodes);
    for (size_t i = 0; i < num_nodes; ++i) loaded.external_ids[i] = static_cast<int64_t>(i);
    *out = new gf_graph{std::move(loaded)};
  });
}

void gf_graph_free(gf_graph* graph) { delete graph; }

size_t gf_graph_num_nodes(const gf_graph* graph) { return graph ? graph->loaded.graph.num_nodes() : 0; }
size_t gf_graph_num_edges(const gf_graph* graph) { return graph ? graph->loaded.graph.num_edges() : 0; }
size_t gf_graph_volume(const gf_graph* graph) { return graph ? graph->loaded.graph.volume() : 0; }
size_t gf_graph_self_loops_dropped(const gf_graph* graph) {
  return graph ? graph->loaded.self_loops_dropped : 0;
}
size_t gf_graph_duplicates_merged(const gf_graph* graph) {
  return graph ? graph->loaded.duplicates_merged : 0;
}

gf_status gf_graph_write_edges(const gf_graph* graph, const char* path) {
  return guarded([&] {
    require(graph, "graph");
    require(path, "path");
    gf::write_edge_list(graph->loaded.graph, std::filesystem::path(path));
  });
}

gf_status gf_graph_write_node_map(const gf_graph* graph, const char* path) {
  return guarded([&] {
    require(graph, "graph");
    require(path, "path");
    gf::write_node_map(graph->loaded.external_ids, std::filesystem::path(path));
  });
}

size_t gf_recipe_count(void) { return gf::recipe_menu().size(); }

const char* gf_recipe_name(size_t index) {
  static const auto names = [] {
    std::vector<std::string> v;
    for (const auto& r : gf::recipe_menu()) v.push_back(gf::recipe_token(r));
    return v;
  }();
  return index < names.size() ? names[index].c_str() : nullptr;
}

int gf_recipe_is_valid(const char* token) {
  return token && gf::parse_recipe(token).has_value() ? 1 : 0;
}

const char* gf_recipe_tokens(void) {
  static const std::string tokens = gf::valid_recipe_tokens();
  return tokens.c_str();
}

gf_status gf_matrix_compute(const gf_graph* graph, const char* recipe, const gf_params* params,
                            gf_matrix** out) {
  return guarded([&] {
    require(graph, "graph");
    require(params, "params");
    require(out, "out");
    const auto r = recipe_or_throw(recipe);
    auto m = base_matrix(graph->loaded.graph, r.base, *params);
    gf::apply_recipe_in_place(m, r);
    *out = new gf_matrix{std::move(m)};
  });
}

gf_status gf_matrix_shifted_pmi(const gf_graph* graph, const gf_params* params, gf_matrix** out) {
  return guarded([&] {
    require(graph, "graph");
    require(params, "params");
    require(out, "out");
    auto q = gf::deepwalk_q(graph->loaded.graph, hyper(*params), cap(*params));
    for (double& x : q.values()) x = x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity();
    *out = new gf_matrix{std::move(q)};
  });
}

gf_status gf_matrix_from_data(size_t rows, size_t cols, const double* row_major, gf_matrix** out) {
  return guarded([&] {
    require(out, "out");
    if (rows * cols) require(row_major, "data");
    gf::DenseMatrix m(rows, cols);
    std::copy(row_major, row_major + rows * cols, m.data());
    *out = new gf_matrix{std::move(m)};
  });
}

gf_status gf_matrix_read_binary(const char* path, gf_matrix** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new gf_matrix{gf::read_binary(std::filesystem::path(path))};
  });
}

void gf_matrix_free(gf_matrix* matrix) { delete matrix; }
size_t gf_matrix_rows(const gf_matrix* matrix) { return matrix ? matrix->m.rows() : 0; }
size_t gf_matrix_cols(const gf_matrix* matrix) { return matrix ? matrix->m.cols() : 0; }
const double* gf_matrix_data(const gf_matrix* matrix) { return matrix ? matrix->m.data() : nullptr; }

gf_status gf_matrix_write_csv(const gf_matrix* matrix, const char* path) {
  return guarded([&] {
    require(matrix, "matrix");
    require(path, "path");
    gf::write_csv(matrix->m, std::filesystem::path(path));
  });
}

gf_status gf_matrix_write_binary(const gf_matrix* matrix, const char* path) {
  return guarded([&] {
    require(matrix, "matrix");
    require(path, "path");
    gf::write_binary(matrix->m, std::filesystem::path(path));
  });
}

gf_status gf_factorize(const gf_matrix* matrix, const gf_params* params, gf_embedding** out) {
  return guarded([&] {
    require(matrix, "matrix");
    require(params, "params");
    require(out, "out");
    gf::SvdOptions o{params->rank, params->oversample, params->power_iters, params->seed};
    *out = new gf_embedding{gf::truncated_svd(matrix->m, o)};
  });
}

void gf_embedding_free(gf_embedding* embedding) { delete embedding; }

size_t gf_embedding_rank(const gf_embedding* embedding) {
  return embedding ? embedding->svd.singular_values.size() : 0;
}

const double* gf_embedding_singular_values(const gf_embedding* embedding) {
  return embedding ? embedding->svd.singular_values.data() : nullptr;
}

gf_status gf_embedding_vectors(const gf_embedding* embedding, gf_matrix** out) {
  return guarded([&] {
    require(embedding, "embedding");
    require(out, "out");
    *out = new gf_matrix{embedding->svd.embedding};
  });
}

gf_status gf_embedding_write_csv(const gf_embedding* embedding, const char* path) {
  return guarded([&] {
    require(embedding, "embedding");
    auto out = open_out(path);
    const auto& y = embedding->svd.embedding;
    out << "node";
    for (size_t k = 0; k < y.cols(); ++k) out << ",y" << k;
    out << '\n';
    std::array<char, 32> buf;
    for (size_t i = 0; i < y.rows(); ++i) {
      out << i;
      for (size_t k = 0; k < y.cols(); ++k) {
        auto res = std::to_chars(buf.data(), buf.data() + buf.size(), y(i, k));
        out << ',' << std::string_view(buf.data(), static_cast<size_t>(res.ptr - buf.data()));
      }
      out << '\n';
    }
  });
}

gf_status gf_embedding_write_binary(const gf_embedding* embedding, const char* path) {
  return guarded([&] {
    require(embedding, "embedding");
    require(path, "path");
    gf::write_binary(embedding->svd.embedding, std::filesystem::path(path));
  });
}

gf_status gf_embedding_reconstruct(const gf_embedding* embedding, gf_matrix** out) {
  return guarded([&] {
    require(embedding, "embedding");
    require(out, "out");
    *out = new gf_matrix{gf::reconstruct(embedding->svd.embedding)};
  });
}

gf_status gf_write_heatmaps(const gf_matrix* ground_truth, const gf_matrix* reconstruction,
                            const char* out_dir, double* lo, double* hi) {
  return guarded([&] {
    require(ground_truth, "ground_truth");
    require(reconstruction, "reconstruction");
    require(out_dir, "out_dir");
    const auto panels = gf::make_heatmap_panels(ground_truth->m, reconstruction->m);
    const std::filesystem::path dir(out_dir);
    const std::pair<const char*, const gf::DenseMatrix*> items[] = {
        {"ground_truth", &panels.ground_truth},
        {"reconstruction", &panels.reconstruction},
        {"difference", &panels.difference}};
    for (const auto& [name, m] : items) {
      gf::write_csv(*m, dir / (std::string(name) + ".csv"));
      gf::write_pgm(*m, panels.lo, panels.hi, dir / (std::string(name) + ".pgm"));
    }
    if (lo) *lo = panels.lo;
    if (hi) *hi = panels.hi;
  });
}

gf_status gf_variance_split(const gf_matrix* values, const gf_matrix* reference, double threshold,
                            double* var_low, double* var_high) {
  return guarded([&] {
    require(values, "values");
    require(reference, "reference");
    const auto split = gf::variance_by_reference(values->m, reference->m, threshold);
    if (var_low) *var_low = split.low;
    if (var_high) *var_high = split.high;
  });
}

gf_status gf_evaluate(const gf_graph* graph, const char* const* recipes, size_t count,
                      const gf_params* params, const char* dataset, gf_report** out) {
  return guarded([&] {
    require(graph, "graph");
    require(params, "params");
    require(out, "out");
    if (count) require(recipes, "recipes");
    std::vector<gf::MatrixRecipe> list;
    for (size_t i = 0; i < count; ++i) list.push_back(recipe_or_throw(recipes[i]));
    gf::EvalOptions o;
    o.params = hyper(*params);
    o.folds = params->folds;
    o.seed = params->seed;
    o.oversample = params->oversample;
    o.power_iters = params->power_iters;
    o.j_index = j_index(*params);
    o.cap = cap(*params);
    *out = new gf_report{gf::evaluate(graph->loaded.graph, list, o, dataset ? dataset : "")};
  });
}

void gf_report_free(gf_report* report) { delete report; }

size_t gf_report_error_count(const gf_report* report) {
  return report ? report->report.errors.size() : 0;
}

gf_status gf_report_mean_test_auc(const gf_report* report, const char* recipe, double* out) {
  return guarded([&] {
    require(report, "report");
    require(out, "out");
    const auto r = recipe_or_throw(recipe);
    for (const auto& rr : report->report.recipes) {
      if (rr.recipe == r && rr.mean_test) {
        *out = *rr.mean_test;
        return;
      }
    }
    throw gf::Error(gf::ErrorCode::kInvalidArgument,
                    std::string("no aggregated result for recipe ") + recipe);
  });
}

gf_status gf_report_write_json(const gf_report* report, const char* path) {
  return guarded([&] {
    require(report, "report");
    auto out = open_out(path, std::ios::binary);
    out << gf::report_json(report->report);
  });
}

gf_status gf_report_write_markdown(const gf_report* report, const char* path) {
  return guarded([&] {
    require(report, "report");
    auto out = open_out(path);
    gf::write_report_markdown(report->report, out);
  });
}

gf_status gf_report_write_csv(const gf_report* report, const char* path) {
  return guarded([&] {
    require(report, "report");
    auto out = open_out(path);
    gf::write_report_csv(report->report, out);
  });
}

gf_status gf_oracle_study(const gf_graph* graph, const gf_params* params,
                          const int* walks_per_node, size_t count, int walk_length,
                          const char* csv_path, const char* markdown_path) {
  return guarded([&] {
    require(graph, "graph");
    require(params, "params");
    if (count) require(walks_per_node, "walks_per_node");
    auto csv = open_out(csv_path);
    const auto study = gf::run_convergence_study(
        graph->loaded.graph, hyper(*params), std::span<const int>(walks_per_node, count),
        walk_length, params->seed, j_index(*params), cap(*params));
    gf::write_convergence_csv(study, csv);
    if (markdown_path) {
      auto md = open_out(markdown_path);
      gf::write_convergence_markdown(study, md);
    }
  });
}

gf_status gf_walks_write(const gf_graph* graph, int walks_per_node, int walk_length, uint64_t seed,
                         const char* path) {
  return guarded([&] {
    require(graph, "graph");
    auto out = open_out(path);
    gf::write_corpus(gf::simulate_walks(graph->loaded.graph, walks_per_node, walk_length, seed), out);
  });
}

}  // extern "C"
