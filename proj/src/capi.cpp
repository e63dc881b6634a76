#include "relsense/relsense.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <utility>

#include "relsense/error.hpp"
#include "relsense/experiments.hpp"
#include "relsense/graph.hpp"
#include "relsense/observability.hpp"
#include "relsense/observer.hpp"
#include "relsense/report.hpp"
#include "relsense/text_io.hpp"

struct rs_matrix {
  relsense::Matrix value;
};

struct rs_graph {
  relsense::Graph value;
};

struct rs_report {
  std::string json;
  int verdict;
};

namespace {

thread_local std::string g_last_error;

rs_status status_of(relsense::ErrorKind kind) {
  switch (kind) {
    case relsense::ErrorKind::InvalidArgument:
      return RS_ERR_INVALID_ARGUMENT;
    case relsense::ErrorKind::Parse:
      return RS_ERR_PARSE;
    case relsense::ErrorKind::Precondition:
      return RS_ERR_PRECONDITION;
    case relsense::ErrorKind::Numerical:
      return RS_ERR_NUMERICAL;
    case relsense::ErrorKind::Io:
      return RS_ERR_IO;
  }
  return RS_ERR_INTERNAL;
}

template <typename F>
rs_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return RS_OK;
  } catch (const relsense::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return RS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return RS_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return RS_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw relsense::InvalidArgumentError(std::string(what) + " is NULL");
}

relsense::Tolerance to_tolerance(rs_tolerance tol) {
  relsense::Tolerance t{tol.rank_rel, tol.zero_abs};
  t.validate();
  return t;
}

std::size_t to_index(std::size_t one_based, const char* what) {
  if (one_based == 0) throw relsense::InvalidArgumentError(std::string(what) + " is 1-based");
  return one_based - 1;
}

void emit_report(rs_report** out, std::string json, int verdict) {
  *out = new rs_report{std::move(json), verdict};
}

void emit_observability(rs_report** out, const relsense::ObservabilityReport& r) {
  emit_report(out, relsense::report_to_json(r), r.observable() ? 1 : 0);
}

template <typename Test>
rs_status analyze_pair(const rs_matrix* a, const rs_matrix* c, rs_tolerance tol,
                       rs_report** out, Test test) {
  return guarded([&] {
    require(a, "A");
    require(c, "C");
    require(out, "out");
    const relsense::LtiSystem sys(a->value, c->value);
    emit_observability(out, test(sys, to_tolerance(tol)));
  });
}

}  // namespace

extern "C" {

RS_API const char* rs_version(void) { return "0.1.0"; }

RS_API const char* rs_last_error(void) { return g_last_error.c_str(); }

RS_API const char* rs_status_name(rs_status status) {
  switch (status) {
    case RS_OK:
      return "ok";
    case RS_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case RS_ERR_PARSE:
      return "parse error";
    case RS_ERR_PRECONDITION:
      return "precondition violation";
    case RS_ERR_NUMERICAL:
      return "numerical failure";
    case RS_ERR_IO:
      return "i/o error";
    case RS_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

RS_API rs_tolerance rs_default_tolerance(void) {
  const relsense::Tolerance t;
  return {t.rank_rel, t.zero_abs};
}

RS_API void rs_string_free(char* s) { std::free(s); }

// ---- matrices ---------------------------------------------------------------

RS_API rs_status rs_matrix_create(size_t rows, size_t cols, const double* row_major,
                                  rs_matrix** out) {
  return guarded([&] {
    require(row_major, "data");
    require(out, "out");
    relsense::Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (size_t i = 0; i < rows; ++i) {
      for (size_t j = 0; j < cols; ++j) {
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row_major[i * cols + j];
      }
    }
    relsense::require_finite(m, "rs_matrix_create");
    *out = new rs_matrix{std::move(m)};
  });
}

RS_API rs_status rs_matrix_parse(const char* text, rs_matrix** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new rs_matrix{relsense::parse_matrix(text)};
  });
}

RS_API rs_status rs_matrix_load(const char* path, rs_matrix** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new rs_matrix{relsense::load_matrix(path)};
  });
}

RS_API rs_status rs_matrix_save(const rs_matrix* m, const char* path) {
  return guarded([&] {
    require(m, "matrix");
    require(path, "path");
    relsense::save_matrix(m->value, path);
  });
}

RS_API size_t rs_matrix_rows(const rs_matrix* m) {
  return m ? static_cast<size_t>(m->value.rows()) : 0;
}

RS_API size_t rs_matrix_cols(const rs_matrix* m) {
  return m ? static_cast<size_t>(m->value.cols()) : 0;
}

RS_API rs_status rs_matrix_copy_data(const rs_matrix* m, double* out, size_t capacity) {
  return guarded([&] {
    require(m, "matrix");
    require(out, "out");
    const auto rows = static_cast<size_t>(m->value.rows());
    const auto cols = static_cast<size_t>(m->value.cols());
    if (capacity < rows * cols) {
      throw relsense::InvalidArgumentError("rs_matrix_copy_data: buffer too small");
    }
    for (size_t i = 0; i < rows; ++i) {
      for (size_t j = 0; j < cols; ++j) {
        out[i * cols + j] = m->value(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
    }
  });
}

RS_API rs_status rs_matrix_rank(const rs_matrix* m, rs_tolerance tol, size_t* out) {
  return guarded([&] {
    require(m, "matrix");
    require(out, "out");
    *out = relsense::rank(m->value, to_tolerance(tol));
  });
}

RS_API void rs_matrix_destroy(rs_matrix* m) { delete m; }

// ---- graphs -----------------------------------------------------------------

RS_API rs_status rs_graph_create(size_t vertex_count, size_t edge_count, const size_t* edges,
                                 const double* weights, rs_graph** out) {
  return guarded([&] {
    require(out, "out");
    if (edge_count > 0) require(edges, "edges");
    std::vector<relsense::Edge> list;
    list.reserve(edge_count);
    for (size_t k = 0; k < edge_count; ++k) {
      list.push_back({to_index(edges[2 * k], "edge endpoint"),
                      to_index(edges[2 * k + 1], "edge endpoint")});
    }
    if (weights != nullptr) {
      *out = new rs_graph{relsense::Graph(vertex_count, std::move(list),
                                          std::vector<double>(weights, weights + edge_count))};
    } else {
      *out = new rs_graph{relsense::Graph(vertex_count, std::move(list))};
    }
  });
}

RS_API rs_status rs_graph_make_family(rs_family family, size_t size, size_t cols, double weight,
                                      rs_graph** out) {
  return guarded([&] {
    require(out, "out");
    relsense::GraphFamily kind;
    switch (family) {
      case RS_FAMILY_PATH:
        kind = relsense::GraphFamily::Path;
        break;
      case RS_FAMILY_CYCLE:
        kind = relsense::GraphFamily::Cycle;
        break;
      case RS_FAMILY_COMPLETE:
        kind = relsense::GraphFamily::Complete;
        break;
      case RS_FAMILY_GRID:
        kind = relsense::GraphFamily::Grid;
        break;
      case RS_FAMILY_STAR:
        kind = relsense::GraphFamily::Star;
        break;
      default:
        throw relsense::InvalidArgumentError("rs_graph_make_family: unknown family");
    }
    relsense::Graph g = relsense::make_family(kind, size, cols);
    if (weight > 0.0) g = g.with_uniform_weight(weight);
    *out = new rs_graph{std::move(g)};
  });
}

RS_API rs_status rs_graph_parse(const char* text, rs_graph** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new rs_graph{relsense::parse_graph(text)};
  });
}

RS_API rs_status rs_graph_load(const char* path, rs_graph** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new rs_graph{relsense::load_graph(path)};
  });
}

RS_API rs_status rs_graph_save(const rs_graph* g, const char* path) {
  return guarded([&] {
    require(g, "graph");
    require(path, "path");
    relsense::save_graph(g->value, path);
  });
}

RS_API rs_status rs_graph_to_text(const rs_graph* g, char** out) {
  return guarded([&] {
    require(g, "graph");
    require(out, "out");
    const std::string text = relsense::format_graph(g->value);
    char* buf = static_cast<char*>(std::malloc(text.size() + 1));
    if (buf == nullptr) throw std::bad_alloc();
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out = buf;
  });
}

RS_API size_t rs_graph_vertex_count(const rs_graph* g) { return g ? g->value.vertex_count() : 0; }

RS_API size_t rs_graph_edge_count(const rs_graph* g) { return g ? g->value.edge_count() : 0; }

RS_API int rs_graph_is_connected(const rs_graph* g) {
  return g && relsense::is_connected(g->value) ? 1 : 0;
}

RS_API rs_status rs_graph_incidence(const rs_graph* g, rs_matrix** out) {
  return guarded([&] {
    require(g, "graph");
    require(out, "out");
    if (g->value.edge_count() == 0) {
      throw relsense::PreconditionError("rs_graph_incidence: graph has no edges");
    }
    *out = new rs_matrix{relsense::incidence_matrix(g->value)};
  });
}

RS_API rs_status rs_graph_laplacian(const rs_graph* g, rs_matrix** out) {
  return guarded([&] {
    require(g, "graph");
    require(out, "out");
    *out = new rs_matrix{relsense::laplacian(g->value)};
  });
}

RS_API rs_status rs_graph_weighted_laplacian(const rs_graph* g, rs_matrix** out) {
  return guarded([&] {
    require(g, "graph");
    require(out, "out");
    *out = new rs_matrix{relsense::weighted_laplacian(g->value)};
  });
}

RS_API void rs_graph_destroy(rs_graph* g) { delete g; }

RS_API rs_status rs_cycle_observation_matrix(size_t n, rs_matrix** out) {
  return guarded([&] {
    require(out, "out");
    *out = new rs_matrix{relsense::cycle_observation_matrix(n)};
  });
}

RS_API rs_status rs_anchored_cycle_matrix(size_t n, rs_matrix** out) {
  return guarded([&] {
    require(out, "out");
    *out = new rs_matrix{relsense::anchored_cycle_matrix(n)};
  });
}

// ---- analysis ---------------------------------------------------------------

RS_API rs_status rs_analyze_rank(const rs_matrix* a, const rs_matrix* c, rs_tolerance tol,
                                 rs_report** out) {
  return analyze_pair(a, c, tol, out, relsense::test_rank);
}

RS_API rs_status rs_analyze_eigenvector(const rs_matrix* a, const rs_matrix* c,
                                        rs_tolerance tol, rs_report** out) {
  return analyze_pair(a, c, tol, out, relsense::test_eigenvector);
}

RS_API rs_status rs_analyze_pbh(const rs_matrix* a, const rs_matrix* c, rs_tolerance tol,
                                rs_report** out) {
  return analyze_pair(a, c, tol, out, relsense::test_pbh);
}

RS_API rs_status rs_analyze_rss(const rs_matrix* a, const rs_graph* g, rs_tolerance tol,
                                rs_report** out) {
  return guarded([&] {
    require(a, "A");
    require(g, "graph");
    require(out, "out");
    emit_observability(out, relsense::test_rss(a->value, g->value, to_tolerance(tol)));
  });
}

RS_API rs_status rs_analyze_anchored(const rs_graph* g, const size_t* anchors,
                                     size_t anchor_count, rs_tolerance tol, rs_report** out) {
  return guarded([&] {
    require(g, "graph");
    require(out, "out");
    if (anchor_count > 0) require(anchors, "anchors");
    std::vector<std::size_t> idx;
    for (size_t k = 0; k < anchor_count; ++k) idx.push_back(to_index(anchors[k], "anchor"));
    const relsense::AnchorSet set(std::move(idx), g->value.vertex_count());
    emit_observability(out, relsense::test_anchored_rss(g->value, set, to_tolerance(tol)));
  });
}

RS_API rs_status rs_analyze_single_anchor(const rs_graph* g, size_t anchor, rs_tolerance tol,
                                          rs_report** out) {
  return guarded([&] {
    require(g, "graph");
    require(out, "out");
    emit_observability(out, relsense::test_single_anchor_agreement(
                                g->value, to_index(anchor, "anchor"), to_tolerance(tol)));
  });
}

RS_API rs_status rs_analyze_symmetry(const rs_graph* g, size_t anchor, size_t budget,
                                     rs_report** out) {
  return guarded([&] {
    require(g, "graph");
    require(out, "out");
    const std::size_t a = to_index(anchor, "anchor");
    const auto r = relsense::find_anchor_symmetry(
        g->value, a, budget == 0 ? relsense::kDefaultSymmetryBudget : budget);
    emit_report(out, relsense::symmetry_to_json(r, a, g->value.vertex_count()), -1);
  });
}

RS_API rs_status rs_analyze_classify(const rs_graph* g, size_t budget, rs_report** out) {
  return guarded([&] {
    require(g, "graph");
    require(out, "out");
    const auto r = relsense::classify_anchors(
        g->value, budget == 0 ? relsense::kDefaultSymmetryBudget : budget);
    emit_report(out, relsense::classification_to_json(r), -1);
  });
}

RS_API rs_status rs_laplacian_equivalence(const rs_matrix* a, const rs_graph* g,
                                          rs_tolerance tol, int* out) {
  return guarded([&] {
    require(a, "A");
    require(g, "graph");
    require(out, "out");
    *out = relsense::test_laplacian_equivalence(a->value, g->value, to_tolerance(tol)) ? 1 : 0;
  });
}

RS_API int rs_report_verdict(const rs_report* r) { return r ? r->verdict : -1; }

RS_API const char* rs_report_json(const rs_report* r) { return r ? r->json.c_str() : ""; }

RS_API void rs_report_destroy(rs_report* r) { delete r; }

// ---- observer ---------------------------------------------------------------

RS_API rs_status rs_observer_spectrum(const rs_graph* g, size_t anchor, double anchor_gain,
                                      double* lambda_min, double* lambda_max) {
  return guarded([&] {
    require(g, "graph");
    relsense::ObserverConfig cfg{g->value, to_index(anchor, "anchor"), anchor_gain,
                                 relsense::Vector::Zero(
                                     static_cast<Eigen::Index>(g->value.vertex_count()))};
    cfg.validate();
    const auto eig = relsense::symmetric_eigen(relsense::build_error_matrix(cfg), {});
    if (lambda_min) *lambda_min = eig.eigenvalues(0);
    if (lambda_max) *lambda_max = eig.eigenvalues(eig.eigenvalues.size() - 1);
  });
}

// ---- experiments ------------------------------------------------------------

RS_API void rs_image_experiment_config_init(rs_image_experiment_config* cfg) {
  if (cfg == nullptr) return;
  *cfg = rs_image_experiment_config{};
  cfg->weight = 1000.0;
  cfg->anchor_gain = 1000.0;
  cfg->seed = 42;
}

RS_API rs_status rs_run_image_experiment(const rs_image_experiment_config* cfg,
                                         rs_image_experiment_summary* out) {
  return guarded([&] {
    require(cfg, "config");
    require(cfg->image_path, "image_path");
    relsense::ImageExperimentSpec spec;
    spec.image = relsense::load_image(cfg->image_path);
    spec.weight = cfg->weight;
    spec.anchor_gain = cfg->anchor_gain;
    spec.seed = cfg->seed;
    if (cfg->dt > 0.0) spec.dt = cfg->dt;
    if (cfg->horizon > 0.0) spec.horizon = cfg->horizon;
    if (cfg->snapshot_times != nullptr) {
      spec.snapshot_times =
          std::vector<double>(cfg->snapshot_times, cfg->snapshot_times + cfg->snapshot_count);
    }
    const relsense::ImageExperimentResult r = relsense::run_image_experiment(spec);
    if (cfg->out_dir != nullptr) relsense::write_image_experiment(r, cfg->out_dir);
    if (out != nullptr) {
      rs_image_experiment_summary s{};
      s.agents = r.agents;
      s.steps = r.times.size() - 1;
      s.frames = r.frames.size();
      s.dt = r.dt;
      s.horizon = r.horizon;
      s.lambda_min = r.lambda_min;
      s.lambda_max = r.lambda_max;
      s.initial_error_norm = r.error_norms.front();
      s.final_error_norm = r.error_norms.back();
      s.exact_reconstruction = r.exact ? 1 : 0;
      s.error_monotone = 1;
      for (size_t k = 1; k < r.error_norms.size(); ++k) {
        if (r.error_norms[k] > r.error_norms[k - 1]) s.error_monotone = 0;
      }
      *out = s;
    }
  });
}

RS_API void rs_tracking_experiment_config_init(rs_tracking_experiment_config* cfg) {
  if (cfg == nullptr) return;
  *cfg = rs_tracking_experiment_config{};
  cfg->agents = 10;
  cfg->weight = 1.0;
  cfg->anchor_gain = 100.0;
  cfg->amplitude = 2.0;
  cfg->frequency = 5.0;
  cfg->control_gain = 30.0;
  cfg->seed = 42;
  cfg->record_every = 1;
}

RS_API rs_status rs_run_tracking_experiment(const rs_tracking_experiment_config* cfg,
                                            rs_tracking_experiment_summary* out) {
  return guarded([&] {
    require(cfg, "config");
    relsense::TrackingExperimentSpec spec;
    spec.agents = cfg->agents;
    if (cfg->anchor > 0) spec.anchor = cfg->anchor - 1;
    spec.weight = cfg->weight;
    spec.anchor_gain = cfg->anchor_gain;
    spec.amplitude = cfg->amplitude;
    spec.frequency = cfg->frequency;
    spec.control_gain = cfg->control_gain;
    if (cfg->dt > 0.0) spec.dt = cfg->dt;
    if (cfg->horizon > 0.0) spec.horizon = cfg->horizon;
    spec.seed = cfg->seed;
    spec.record_every = cfg->record_every == 0 ? 1 : cfg->record_every;
    const relsense::TrackingExperimentResult r = relsense::run_tracking_experiment(spec);
    if (cfg->out_path != nullptr) {
      relsense::write_text_file(cfg->out_path, relsense::trace_to_csv(r.trace));
    }
    if (out != nullptr) {
      rs_tracking_experiment_summary s{};
      s.samples = r.trace.times.size();
      s.dt = r.dt;
      s.horizon = r.horizon;
      s.lambda_min = r.lambda_min;
      s.lambda_max = r.lambda_max;
      s.initial_error_norm = r.trace.error_norms.front();
      s.final_error_norm = r.trace.error_norms.back();
      double ratio = 0.0;
      for (size_t k = 0; k < r.trace.times.size(); ++k) {
        const double envelope =
            s.initial_error_norm * std::exp(-r.lambda_min * r.trace.times[k]);
        if (envelope > 0.0) ratio = std::max(ratio, r.trace.error_norms[k] / envelope);
      }
      s.envelope_ratio = ratio;
      *out = s;
    }
  });
}

}  // extern "C"
