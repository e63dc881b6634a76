// Command-line front end. Talks to the library only through relsense.h.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "relsense/relsense.h"

namespace {

constexpr int kExitParse = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitNumerical = 4;

struct Failure {
  rs_status status;
  std::string message;
};

int exit_code(rs_status s) {
  switch (s) {
    case RS_OK:
      return 0;
    case RS_ERR_PARSE:
    case RS_ERR_IO:
      return kExitParse;
    case RS_ERR_INVALID_ARGUMENT:
    case RS_ERR_PRECONDITION:
      return kExitPrecondition;
    case RS_ERR_NUMERICAL:
      return kExitNumerical;
    default:
      return 1;
  }
}

void check(rs_status s) {
  if (s != RS_OK) throw Failure{s, rs_last_error()};
}

struct MatrixDeleter {
  void operator()(rs_matrix* m) const { rs_matrix_destroy(m); }
};
struct GraphDeleter {
  void operator()(rs_graph* g) const { rs_graph_destroy(g); }
};
struct ReportDeleter {
  void operator()(rs_report* r) const { rs_report_destroy(r); }
};
using MatrixPtr = std::unique_ptr<rs_matrix, MatrixDeleter>;
using GraphPtr = std::unique_ptr<rs_graph, GraphDeleter>;
using ReportPtr = std::unique_ptr<rs_report, ReportDeleter>;

MatrixPtr load_matrix(const std::string& path, const char* flag) {
  if (path.empty()) throw Failure{RS_ERR_PARSE, std::string("missing ") + flag};
  rs_matrix* m = nullptr;
  check(rs_matrix_load(path.c_str(), &m));
  return MatrixPtr(m);
}

GraphPtr load_graph(const std::string& path) {
  if (path.empty()) throw Failure{RS_ERR_PARSE, "missing --graph"};
  rs_graph* g = nullptr;
  check(rs_graph_load(path.c_str(), &g));
  return GraphPtr(g);
}

std::vector<size_t> parse_anchor_list(const std::string& text) {
  std::vector<size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size() || v <= 0) throw std::invalid_argument(item);
      out.push_back(static_cast<size_t>(v));
    } catch (const std::exception&) {
      throw Failure{RS_ERR_PARSE, "bad anchor '" + item + "' (expected positive 1-based indices)"};
    }
  }
  if (out.empty()) throw Failure{RS_ERR_PARSE, "missing --anchor"};
  return out;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!text.empty() && text.back() != '\n') f << '\n';
  if (!f) throw Failure{RS_ERR_IO, "cannot write '" + path + "'"};
}

struct Common {
  double tol_rank = 0.0;
  double tol_zero = 0.0;
  uint64_t seed = 42;
  double dt = 0.0;
  double horizon = 0.0;
  std::string out_dir;

  rs_tolerance tolerance() const {
    rs_tolerance t = rs_default_tolerance();
    if (tol_rank > 0.0) t.rank_rel = tol_rank;
    if (tol_zero > 0.0) t.zero_abs = tol_zero;
    return t;
  }
};

struct AnalyzeArgs {
  std::string test;
  std::string a_path, c_path, graph_path, anchor, out;
  size_t budget = 0;
};

int run_analyze(const AnalyzeArgs& args, const Common& common) {
  const rs_tolerance tol = common.tolerance();
  rs_report* raw = nullptr;
  const std::string& t = args.test;
  if (t == "rank" || t == "eigenvector" || t == "pbh") {
    auto a = load_matrix(args.a_path, "--A");
    auto c = load_matrix(args.c_path, "--C");
    auto fn = t == "rank" ? rs_analyze_rank : t == "pbh" ? rs_analyze_pbh : rs_analyze_eigenvector;
    check(fn(a.get(), c.get(), tol, &raw));
  } else if (t == "rss") {
    auto a = load_matrix(args.a_path, "--A");
    auto g = load_graph(args.graph_path);
    check(rs_analyze_rss(a.get(), g.get(), tol, &raw));
  } else if (t == "anchored") {
    auto g = load_graph(args.graph_path);
    const auto anchors = parse_anchor_list(args.anchor);
    check(rs_analyze_anchored(g.get(), anchors.data(), anchors.size(), tol, &raw));
  } else if (t == "single-anchor" || t == "symmetry") {
    auto g = load_graph(args.graph_path);
    const auto anchors = parse_anchor_list(args.anchor);
    if (anchors.size() != 1) throw Failure{RS_ERR_PARSE, "--test " + t + " takes one anchor"};
    if (t == "symmetry") {
      check(rs_analyze_symmetry(g.get(), anchors[0], args.budget, &raw));
    } else {
      check(rs_analyze_single_anchor(g.get(), anchors[0], tol, &raw));
    }
  } else if (t == "classify") {
    auto g = load_graph(args.graph_path);
    check(rs_analyze_classify(g.get(), args.budget, &raw));
  } else {
    throw Failure{RS_ERR_PARSE, "unknown test '" + t + "'"};
  }
  ReportPtr report(raw);
  emit(rs_report_json(report.get()), args.out);
  if (!args.out.empty()) {
    const int v = rs_report_verdict(report.get());
    std::cout << t << ": "
              << (v == 1 ? "observable" : v == 0 ? "unobservable" : "done") << " -> " << args.out
              << '\n';
  }
  return 0;
}

struct ImageArgs {
  std::string image;
  double weight = 1000.0;
  double gain = 1000.0;
  std::vector<double> snapshots;
};

int run_image(const ImageArgs& args, const Common& common) {
  rs_image_experiment_config cfg;
  rs_image_experiment_config_init(&cfg);
  const std::string out_dir = common.out_dir.empty() ? "image_out" : common.out_dir;
  cfg.image_path = args.image.c_str();
  cfg.out_dir = out_dir.c_str();
  cfg.weight = args.weight;
  cfg.anchor_gain = args.gain;
  cfg.dt = common.dt;
  cfg.horizon = common.horizon;
  cfg.seed = common.seed;
  if (!args.snapshots.empty()) {
    cfg.snapshot_times = args.snapshots.data();
    cfg.snapshot_count = args.snapshots.size();
  }
  rs_image_experiment_summary s{};
  check(rs_run_image_experiment(&cfg, &s));
  std::printf("agents=%zu steps=%zu frames=%zu dt=%.6g T=%.6g lambda_min=%.6g lambda_max=%.6g\n",
              s.agents, s.steps, s.frames, s.dt, s.horizon, s.lambda_min, s.lambda_max);
  std::printf("err0=%.6g errT=%.6g exact=%s monotone=%s out=%s\n", s.initial_error_norm,
              s.final_error_norm, s.exact_reconstruction ? "yes" : "no",
              s.error_monotone ? "yes" : "no", out_dir.c_str());
  return 0;
}

struct TrackArgs {
  size_t n = 10;
  size_t anchor = 0;
  double weight = 1.0;
  double gain = 100.0;
  double amplitude = 2.0;
  double frequency = 5.0;
  double control_gain = 30.0;
  size_t record_every = 1;
  std::string out;
};

int run_track(const TrackArgs& args, const Common& common) {
  rs_tracking_experiment_config cfg;
  rs_tracking_experiment_config_init(&cfg);
  std::string out = args.out;
  if (out.empty()) {
    const std::string dir = common.out_dir.empty() ? "." : common.out_dir;
    std::filesystem::create_directories(dir);
    out = (std::filesystem::path(dir) / "trace.csv").string();
  }
  cfg.agents = args.n;
  cfg.anchor = args.anchor;
  cfg.weight = args.weight;
  cfg.anchor_gain = args.gain;
  cfg.amplitude = args.amplitude;
  cfg.frequency = args.frequency;
  cfg.control_gain = args.control_gain;
  cfg.dt = common.dt;
  cfg.horizon = common.horizon;
  cfg.seed = common.seed;
  cfg.record_every = args.record_every;
  cfg.out_path = out.c_str();
  rs_tracking_experiment_summary s{};
  check(rs_run_tracking_experiment(&cfg, &s));
  std::printf("samples=%zu dt=%.6g T=%.6g lambda_min=%.6g lambda_max=%.6g\n", s.samples, s.dt,
              s.horizon, s.lambda_min, s.lambda_max);
  std::printf("err0=%.6g errT=%.6g envelope_ratio=%.9g out=%s\n", s.initial_error_norm,
              s.final_error_norm, s.envelope_ratio, out.c_str());
  return 0;
}

struct GenArgs {
  std::string family;
  size_t n = 0, rows = 0, cols = 0, leaves = 0;
  double weight = 0.0;
  std::string out;
};

int run_gen(const GenArgs& args) {
  static const std::map<std::string, rs_family> families = {{"path", RS_FAMILY_PATH},
                                                            {"cycle", RS_FAMILY_CYCLE},
                                                            {"complete", RS_FAMILY_COMPLETE},
                                                            {"grid", RS_FAMILY_GRID},
                                                            {"star", RS_FAMILY_STAR}};
  const auto it = families.find(args.family);
  if (it == families.end()) throw Failure{RS_ERR_PARSE, "unknown family '" + args.family + "'"};
  size_t size = args.n, cols = 0;
  if (it->second == RS_FAMILY_GRID) {
    size = args.rows;
    cols = args.cols;
  } else if (it->second == RS_FAMILY_STAR) {
    size = args.leaves;
  }
  rs_graph* raw = nullptr;
  check(rs_graph_make_family(it->second, size, cols, args.weight, &raw));
  GraphPtr g(raw);
  char* text = nullptr;
  check(rs_graph_to_text(g.get(), &text));
  const std::string out(text);
  rs_string_free(text);
  emit(out, args.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relsense: observability of relative-sensing networks and distributed observers"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(rs_version()));

  Common common;
  app.add_option("--tol-rank", common.tol_rank, "relative rank tolerance (default 1e-9)");
  app.add_option("--tol-zero", common.tol_zero, "absolute zero tolerance (default 1e-8)");
  app.add_option("--seed", common.seed, "random seed")->capture_default_str();
  app.add_option("--dt", common.dt, "integration step (default 1.8/lambda_max)");
  app.add_option("--T", common.horizon, "simulation horizon");
  app.add_option("--out-dir", common.out_dir, "output directory");

  AnalyzeArgs analyze;
  auto* a = app.add_subcommand("analyze", "run an observability test and print a JSON report");
  a->add_option("--test", analyze.test,
                "rank | eigenvector | pbh | rss | anchored | single-anchor | symmetry | classify")
      ->required();
  a->add_option("--A", analyze.a_path, "state matrix file");
  a->add_option("--C", analyze.c_path, "observation matrix file");
  a->add_option("--graph", analyze.graph_path, "graph edge-list file");
  a->add_option("--anchor", analyze.anchor, "1-based anchor vertex (comma list for anchored)");
  a->add_option("--budget", analyze.budget, "symmetry search node budget (0: default)");
  a->add_option("--out", analyze.out, "write the report here instead of stdout");

  ImageArgs image;
  auto* im = app.add_subcommand("image-exp", "reconstruct a grayscale image with the observer");
  im->add_option("--image", image.image, "PGM image (P2 or P5)")->required();
  im->add_option("--weight", image.weight, "uniform edge weight")->capture_default_str();
  im->add_option("--K", image.gain, "anchor gain")->capture_default_str();
  im->add_option("--snapshots", image.snapshots, "snapshot times (default T/32 ladder)");

  TrackArgs track;
  auto* tr = app.add_subcommand("track-exp", "estimate agents tracking a sinusoid on a cycle");
  tr->add_option("--n", track.n, "agent count")->capture_default_str();
  tr->add_option("--anchor", track.anchor, "1-based anchor (default: last agent)");
  tr->add_option("--weight", track.weight, "uniform edge weight")->capture_default_str();
  tr->add_option("--K", track.gain, "anchor gain")->capture_default_str();
  tr->add_option("--amplitude", track.amplitude, "reference amplitude")->capture_default_str();
  tr->add_option("--frequency", track.frequency, "reference angular frequency")
      ->capture_default_str();
  tr->add_option("--control-gain", track.control_gain, "proportional tracking gain")
      ->capture_default_str();
  tr->add_option("--record-every", track.record_every, "keep every k-th step in the trace")
      ->capture_default_str();
  tr->add_option("--out", track.out, "CSV trace path (default <out-dir>/trace.csv)");

  GenArgs gen;
  auto* gg = app.add_subcommand("gen-graph", "write a standard graph family as an edge list");
  gg->add_option("--family", gen.family, "path | cycle | complete | grid | star")->required();
  gg->add_option("--n", gen.n, "vertex count (path, cycle, complete)");
  gg->add_option("--rows", gen.rows, "grid rows");
  gg->add_option("--cols", gen.cols, "grid columns");
  gg->add_option("--leaves", gen.leaves, "star leaves");
  gg->add_option("--weight", gen.weight, "uniform edge weight (omit for unweighted)");
  gg->add_option("--out", gen.out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitParse;
  }

  try {
    if (*a) return run_analyze(analyze, common);
    if (*im) return run_image(image, common);
    if (*tr) return run_track(track, common);
    return run_gen(gen);
  } catch (const Failure& f) {
    std::fprintf(stderr, "relsense: %s: %s\n", rs_status_name(f.status), f.message.c_str());
    return exit_code(f.status);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "relsense: %s\n", e.what());
    return kExitParse;
  }
}
