/*
 * graphfactor C API.
 *
 * Every object is an opaque handle owned by the caller and released with
 * the matching *_free function. Functions that can fail return gf_status;
 * on failure gf_last_error() describes the problem (thread-local, valid
 * until the next failing call on the same thread).
 */
#ifndef GRAPHFACTOR_H
#define GRAPHFACTOR_H

#include <stddef.h>
#include <stdint.h>

#if defined(GRAPHFACTOR_BUILDING_LIBRARY)
#define GF_API __attribute__((visibility("default")))
#else
#define GF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gf_status {
  GF_OK = 0,
  GF_ERR_INVALID_ARGUMENT = 1,
  GF_ERR_IO = 2,
  GF_ERR_PARSE = 3,
  GF_ERR_EMPTY_GRAPH = 4,
  GF_ERR_DIMENSION = 5,
  GF_ERR_MEMORY_CAP = 6,
  GF_ERR_ZERO_DEGREE = 7,
  GF_ERR_INSUFFICIENT_PAIRS = 8,
  GF_ERR_NUMERIC = 9,
  GF_ERR_OUT_OF_MEMORY = 10,
  GF_ERR_INTERNAL = 11
} gf_status;

typedef enum gf_j_index {
  GF_J_CANONICAL = 0,    /* sum_{k=0}^{T-1} (P^T)^k A / (T vol) */
  GF_J_PAPER_LITERAL = 1 /* sum_{r=1}^{T-1} (P^r)^T A / (T vol) */
} gf_j_index;

typedef struct gf_graph gf_graph;
typedef struct gf_matrix gf_matrix;
typedef struct gf_embedding gf_embedding;
typedef struct gf_report gf_report;

typedef struct gf_params {
  int window;       /* T */
  double negatives; /* b */
  int rank;         /* d */
  int folds;        /* k */
  uint64_t seed;
  int oversample;
  int power_iters;
  int j_index; /* gf_j_index */
  uint64_t mem_cap_nodes;
} gf_params;

GF_API const char* gf_version(void);
GF_API const char* gf_last_error(void);
GF_API const char* gf_status_string(gf_status status);
GF_API void gf_set_threads(int threads);

/* "paper-main" values: T=10, b=10, d=128, k=5, seed 42, oversample 10,
 * 7 power iterations, canonical J, cap 20000 nodes. */
GF_API void gf_params_init(gf_params* params);
/* Overwrites T, b, d (and k) with a named preset: "paper-main" or
 * "karate-fig1". */
GF_API gf_status gf_params_apply_preset(gf_params* params, const char* preset);

/* ---- graphs ---- */
GF_API gf_status gf_graph_load(const char* path, gf_graph** out);
/* endpoints holds 2*num_edges node ids (u0 v0 u1 v1 ...). */
GF_API gf_status gf_graph_from_edges(size_t num_nodes, const uint32_t* endpoints,
                                     size_t num_edges, gf_graph** out);
GF_API void gf_graph_free(gf_graph* graph);
GF_API size_t gf_graph_num_nodes(const gf_graph* graph);
GF_API size_t gf_graph_num_edges(const gf_graph* graph);
GF_API size_t gf_graph_volume(const gf_graph* graph);
GF_API size_t gf_graph_self_loops_dropped(const gf_graph* graph);
GF_API size_t gf_graph_duplicates_merged(const gf_graph* graph);
GF_API gf_status gf_graph_write_edges(const gf_graph* graph, const char* path);
/* CSV "external_id,internal_id". */
GF_API gf_status gf_graph_write_node_map(const gf_graph* graph, const char* path);

/* ---- recipes: a, sig_a, j, sig_j, q, sig_q, trunc_log_q, sig_log_q ---- */
GF_API size_t gf_recipe_count(void);
GF_API const char* gf_recipe_name(size_t index);
GF_API int gf_recipe_is_valid(const char* token);
GF_API const char* gf_recipe_tokens(void);

/* ---- dense matrices ---- */
GF_API gf_status gf_matrix_compute(const gf_graph* graph, const char* recipe,
                                   const gf_params* params, gf_matrix** out);
/* log Q with -inf where Q = 0. */
GF_API gf_status gf_matrix_shifted_pmi(const gf_graph* graph, const gf_params* params,
                                       gf_matrix** out);
GF_API gf_status gf_matrix_from_data(size_t rows, size_t cols, const double* row_major,
                                     gf_matrix** out);
GF_API gf_status gf_matrix_read_binary(const char* path, gf_matrix** out);
GF_API void gf_matrix_free(gf_matrix* matrix);
GF_API size_t gf_matrix_rows(const gf_matrix* matrix);
GF_API size_t gf_matrix_cols(const gf_matrix* matrix);
GF_API const double* gf_matrix_data(const gf_matrix* matrix);
GF_API gf_status gf_matrix_write_csv(const gf_matrix* matrix, const char* path);
GF_API gf_status gf_matrix_write_binary(const gf_matrix* matrix, const char* path);

/* ---- factorization ---- */
/* Truncated SVD at params->rank; embedding Y = U_d sqrt(S_d). */
GF_API gf_status gf_factorize(const gf_matrix* matrix, const gf_params* params,
                              gf_embedding** out);
GF_API void gf_embedding_free(gf_embedding* embedding);
GF_API size_t gf_embedding_rank(const gf_embedding* embedding);
GF_API const double* gf_embedding_singular_values(const gf_embedding* embedding);
GF_API gf_status gf_embedding_vectors(const gf_embedding* embedding, gf_matrix** out);
/* CSV with header "node,y0,...,y{d-1}". */
GF_API gf_status gf_embedding_write_csv(const gf_embedding* embedding, const char* path);
GF_API gf_status gf_embedding_write_binary(const gf_embedding* embedding, const char* path);
/* Y Y^T. */
GF_API gf_status gf_embedding_reconstruct(const gf_embedding* embedding, gf_matrix** out);

/* Writes ground_truth, reconstruction and difference as .csv and .pgm into
 * out_dir using one shared scale, reported through lo/hi (may be NULL). */
GF_API gf_status gf_write_heatmaps(const gf_matrix* ground_truth, const gf_matrix* reconstruction,
                                   const char* out_dir, double* lo, double* hi);
/* Variance of `values` over entries where reference < threshold and >= threshold. */
GF_API gf_status gf_variance_split(const gf_matrix* values, const gf_matrix* reference,
                                   double threshold, double* var_low, double* var_high);

/* ---- link prediction ---- */
GF_API gf_status gf_evaluate(const gf_graph* graph, const char* const* recipes, size_t count,
                             const gf_params* params, const char* dataset, gf_report** out);
GF_API void gf_report_free(gf_report* report);
GF_API size_t gf_report_error_count(const gf_report* report);
GF_API gf_status gf_report_mean_test_auc(const gf_report* report, const char* recipe,
                                         double* out);
GF_API gf_status gf_report_write_json(const gf_report* report, const char* path);
GF_API gf_status gf_report_write_markdown(const gf_report* report, const char* path);
GF_API gf_status gf_report_write_csv(const gf_report* report, const char* path);

/* ---- random-walk oracle ---- */
/* Runs the convergence study for each walks-per-node value and writes a
 * CSV table (seed in the header line) and, if markdown_path is not NULL,
 * a markdown table. */
GF_API gf_status gf_oracle_study(const gf_graph* graph, const gf_params* params,
                                 const int* walks_per_node, size_t count, int walk_length,
                                 const char* csv_path, const char* markdown_path);
/* One walk per line, space-separated node ids. */
GF_API gf_status gf_walks_write(const gf_graph* graph, int walks_per_node, int walk_length,
                                uint64_t seed, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* GRAPHFACTOR_H */
