/*
 * relsense C API.
 *
 * Every object crosses the boundary as an opaque handle created by an
 * rs_*_create / rs_*_load / rs_* factory and released with the matching
 * rs_*_destroy. Functions return an rs_status; on failure a description of
 * the most recent error on the calling thread is available from
 * rs_last_error(). Vertex and anchor indices are 1-based throughout.
 */
#ifndef RELSENSE_H
#define RELSENSE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(RS_BUILDING_LIBRARY)
#    define RS_API __declspec(dllexport)
#  else
#    define RS_API __declspec(dllimport)
#  endif
#else
#  define RS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status values 2, 3 and 4 double as the CLI exit codes. */
typedef enum rs_status {
  RS_OK = 0,
  RS_ERR_INVALID_ARGUMENT = 1,
  RS_ERR_PARSE = 2,
  RS_ERR_PRECONDITION = 3,
  RS_ERR_NUMERICAL = 4,
  RS_ERR_IO = 5,
  RS_ERR_INTERNAL = 6
} rs_status;

typedef struct rs_matrix rs_matrix;
typedef struct rs_graph rs_graph;
typedef struct rs_report rs_report;

typedef struct rs_tolerance {
  double rank_rel;
  double zero_abs;
} rs_tolerance;

typedef enum rs_family {
  RS_FAMILY_PATH = 0,
  RS_FAMILY_CYCLE = 1,
  RS_FAMILY_COMPLETE = 2,
  RS_FAMILY_GRID = 3,
  RS_FAMILY_STAR = 4
} rs_family;

RS_API const char* rs_version(void);
RS_API const char* rs_last_error(void);
RS_API const char* rs_status_name(rs_status status);
RS_API rs_tolerance rs_default_tolerance(void);

/* Strings returned through char** are owned by the caller. */
RS_API void rs_string_free(char* s);

/* ---- matrices (row-major) ---------------------------------------------- */

RS_API rs_status rs_matrix_create(size_t rows, size_t cols, const double* row_major,
                                  rs_matrix** out);
RS_API rs_status rs_matrix_parse(const char* text, rs_matrix** out);
RS_API rs_status rs_matrix_load(const char* path, rs_matrix** out);
RS_API rs_status rs_matrix_save(const rs_matrix* m, const char* path);
RS_API size_t rs_matrix_rows(const rs_matrix* m);
RS_API size_t rs_matrix_cols(const rs_matrix* m);
/* Copies rows*cols entries, row-major, into `out`. */
RS_API rs_status rs_matrix_copy_data(const rs_matrix* m, double* out, size_t capacity);
RS_API rs_status rs_matrix_rank(const rs_matrix* m, rs_tolerance tol, size_t* out);
RS_API void rs_matrix_destroy(rs_matrix* m);

/* ---- graphs ------------------------------------------------------------ */

/* `edges` holds 2*edge_count 1-based endpoints (tail, head); `weights` may be
 * NULL for an unweighted graph. */
RS_API rs_status rs_graph_create(size_t vertex_count, size_t edge_count, const size_t* edges,
                                 const double* weights, rs_graph** out);
/* size: n for path/cycle/complete, rows for grid, leaves for star. cols: grid
 * only. weight > 0 attaches a uniform weight, weight <= 0 leaves the graph
 * unweighted. */
RS_API rs_status rs_graph_make_family(rs_family family, size_t size, size_t cols, double weight,
                                      rs_graph** out);
RS_API rs_status rs_graph_parse(const char* text, rs_graph** out);
RS_API rs_status rs_graph_load(const char* path, rs_graph** out);
RS_API rs_status rs_graph_save(const rs_graph* g, const char* path);
RS_API rs_status rs_graph_to_text(const rs_graph* g, char** out);
RS_API size_t rs_graph_vertex_count(const rs_graph* g);
RS_API size_t rs_graph_edge_count(const rs_graph* g);
RS_API int rs_graph_is_connected(const rs_graph* g);
RS_API rs_status rs_graph_incidence(const rs_graph* g, rs_matrix** out);
RS_API rs_status rs_graph_laplacian(const rs_graph* g, rs_matrix** out);
RS_API rs_status rs_graph_weighted_laplacian(const rs_graph* g, rs_matrix** out);
RS_API void rs_graph_destroy(rs_graph* g);

RS_API rs_status rs_cycle_observation_matrix(size_t n, rs_matrix** out);
RS_API rs_status rs_anchored_cycle_matrix(size_t n, rs_matrix** out);

/* ---- observability analysis -------------------------------------------- */

RS_API rs_status rs_analyze_rank(const rs_matrix* a, const rs_matrix* c, rs_tolerance tol,
                                 rs_report** out);
RS_API rs_status rs_analyze_eigenvector(const rs_matrix* a, const rs_matrix* c,
                                        rs_tolerance tol, rs_report** out);
RS_API rs_status rs_analyze_pbh(const rs_matrix* a, const rs_matrix* c, rs_tolerance tol,
                                rs_report** out);
RS_API rs_status rs_analyze_rss(const rs_matrix* a, const rs_graph* g, rs_tolerance tol,
                                rs_report** out);
RS_API rs_status rs_analyze_anchored(const rs_graph* g, const size_t* anchors,
                                     size_t anchor_count, rs_tolerance tol, rs_report** out);
RS_API rs_status rs_analyze_single_anchor(const rs_graph* g, size_t anchor, rs_tolerance tol,
                                          rs_report** out);
/* budget = 0 selects the default search budget. */
RS_API rs_status rs_analyze_symmetry(const rs_graph* g, size_t anchor, size_t budget,
                                     rs_report** out);
RS_API rs_status rs_analyze_classify(const rs_graph* g, size_t budget, rs_report** out);
/* *out = 1 when (A, D^T) and (A, L) agree. */
RS_API rs_status rs_laplacian_equivalence(const rs_matrix* a, const rs_graph* g,
                                          rs_tolerance tol, int* out);

/* 1 observable, 0 unobservable, -1 for documents without a verdict
 * (symmetry searches and classifications). */
RS_API int rs_report_verdict(const rs_report* r);
/* JSON document; the pointer lives as long as the report. */
RS_API const char* rs_report_json(const rs_report* r);
RS_API void rs_report_destroy(rs_report* r);

/* ---- observer ---------------------------------------------------------- */

/* lambda_min and lambda_max of L_w + K Delta_anchor for a weighted graph. */
RS_API rs_status rs_observer_spectrum(const rs_graph* g, size_t anchor, double anchor_gain,
                                      double* lambda_min, double* lambda_max);

/* ---- experiments ------------------------------------------------------- */

/* Non-positive dt / horizon select the defaults. */
typedef struct rs_image_experiment_config {
  const char* image_path;
  const char* out_dir; /* NULL: nothing written */
  double weight;
  double anchor_gain;
  double dt;
  double horizon;
  uint64_t seed;
  const double* snapshot_times; /* NULL: default ladder */
  size_t snapshot_count;
} rs_image_experiment_config;

typedef struct rs_image_experiment_summary {
  size_t agents;
  size_t steps;
  size_t frames;
  double dt;
  double horizon;
  double lambda_min;
  double lambda_max;
  double initial_error_norm;
  double final_error_norm;
  int exact_reconstruction;
  int error_monotone;
} rs_image_experiment_summary;

RS_API void rs_image_experiment_config_init(rs_image_experiment_config* cfg);
RS_API rs_status rs_run_image_experiment(const rs_image_experiment_config* cfg,
                                         rs_image_experiment_summary* out);

typedef struct rs_tracking_experiment_config {
  size_t agents;
  size_t anchor; /* 1-based; 0 selects the last agent */
  double weight;
  double anchor_gain;
  double amplitude;
  double frequency;
  double control_gain;
  double dt;
  double horizon;
  uint64_t seed;
  size_t record_every;
  const char* out_path; /* CSV trace; NULL: nothing written */
} rs_tracking_experiment_config;

typedef struct rs_tracking_experiment_summary {
  size_t samples;
  double dt;
  double horizon;
  double lambda_min;
  double lambda_max;
  double initial_error_norm;
  double final_error_norm;
  /* max over samples of ||e(t)|| / (||e(0)|| exp(-lambda_min t)) */
  double envelope_ratio;
} rs_tracking_experiment_summary;

RS_API void rs_tracking_experiment_config_init(rs_tracking_experiment_config* cfg);
RS_API rs_status rs_run_tracking_experiment(const rs_tracking_experiment_config* cfg,
                                            rs_tracking_experiment_summary* out);

#ifdef __cplusplus
}
#endif

#endif /* RELSENSE_H */
