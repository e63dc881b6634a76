// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "relsense/error.hpp"
#include "relsense/experiments.hpp"
#include "relsense/observability.hpp"
#include "relsense/observer.hpp"

using namespace relsense;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects the first few failure messages and counts the rest.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (messages_.size() < 3) messages_.push_back(what);
  }
  Outcome outcome(const std::string& summary) const {
    if (failures_ == 0) return {true, summary};
    std::ostringstream os;
    os << failures_ << " failure(s): ";
    for (std::size_t i = 0; i < messages_.size(); ++i) os << (i ? "; " : "") << messages_[i];
    return {false, os.str()};
  }

 private:
  int failures_ = 0;
  std::vector<std::string> messages_;
};

Graph random_graph(std::size_t n, double extra, std::mt19937_64& rng) {
  std::vector<Edge> list;
  for (auto [u, v] : oracle::random_connected_edges(n, extra, rng)) list.push_back({u, v});
  return Graph(n, list);
}

Graph random_weighted_graph(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> w(0.1, 10.0);
  const Graph g = random_graph(n, 0.3, rng);
  std::vector<double> weights(g.edge_count());
  for (auto& x : weights) x = w(rng);
  return g.with_weights(weights);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// ---- 1 ----------------------------------------------------------------------
Outcome cycle_rank_law() {
  Checker c;
  const Tolerance tol;
  for (std::size_t n = 2; n <= 25; ++n) {
    const auto rc = rank(cycle_observation_matrix(n), tol);
    const auto ra = rank(anchored_cycle_matrix(n), tol);
    c.expect(rc == n - 1, "rank C_" + std::to_string(n) + " = " + std::to_string(rc));
    c.expect(ra == n, "rank anchored C_" + std::to_string(n) + " = " + std::to_string(ra));
  }
  return c.outcome("n = 2..25: rank n-1 and n");
}

// ---- 2 ----------------------------------------------------------------------
Outcome incidence_kernel_law() {
  Checker c;
  std::mt19937_64 rng(2024);
  const Tolerance tol;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 11;
    const Graph g = random_graph(n, 0.3, rng);
    const Matrix dt = incidence_matrix(g).transpose();
    c.expect(rank(dt, tol) == n - 1, "rank D^T on graph " + std::to_string(trial));
    const auto basis = nullspace_basis(dt, tol);
    if (basis.size() != 1) {
      c.expect(false, "nullity " + std::to_string(basis.size()) + " on graph " +
                          std::to_string(trial));
      continue;
    }
    const Vector u = Vector::Ones(static_cast<Eigen::Index>(n)) / std::sqrt(double(n));
    const double off_span = (basis[0] - basis[0].dot(u) * u).norm();
    worst = std::max(worst, off_span);
    c.expect(off_span <= 1e-8, "kernel leaves span(1) by " + fmt(off_span));
  }
  return c.outcome("100 graphs, n <= 12, worst distance from span(1) " + fmt(worst));
}

// ---- 3 ----------------------------------------------------------------------
Outcome cycle_examples() {
  Checker c;
  const Tolerance tol;
  const Matrix cc = cycle_observation_matrix(3);
  auto run = [&](const Matrix& a) {
    const auto r = test_rank(LtiSystem(a, cc), tol);
    return std::pair{r.observable(), std::get<RankCertificate>(r.certificate).rank};
  };
  const Matrix d = Eigen::Vector3d(1, 1, 2).asDiagonal();
  const auto rd = run(d);
  const auto ri = run(Matrix::Identity(3, 3));
  const auto rz = run(Matrix::Zero(3, 3));
  c.expect(rd.first && rd.second == 3, "diag(1,1,2): rank " + std::to_string(rd.second));
  c.expect(!ri.first && ri.second == 2, "I_3: rank " + std::to_string(ri.second));
  c.expect(!rz.first && rz.second == 2, "O_3: rank " + std::to_string(rz.second));
  return c.outcome("diag(1,1,2) rank 3 observable; I_3 and O_3 rank 2 unobservable");
}

// ---- 4 ----------------------------------------------------------------------

// Re-derives an unobservable certificate from scratch.
void revalidate(const ObservabilityReport& r, const LtiSystem& sys, Checker& c,
                const std::string& tag) {
  const Tolerance tol = r.tolerance;
  const Matrix& a = sys.a();
  const Matrix& cm = sys.c();
  const double scale = 1.0 + matrix_norm(a);
  const Eigen::Index n = a.rows();
  if (const auto* w = std::get_if<EigenvectorWitness>(&r.certificate)) {
    c.expect(std::abs(w->witness.norm() - 1.0) < 1e-12, tag + ": witness not unit");
    const double res = (a * w->witness - w->eigenvalue * w->witness).norm();
    c.expect(res <= 1e-6 * scale, tag + ": eigen-residual " + fmt(res));
    c.expect((cm * w->witness).norm() <= tol.zero_abs, tag + ": C w not zero");
  } else if (const auto* p = std::get_if<PbhCertificate>(&r.certificate)) {
    if (!p->failing) {
      c.expect(false, tag + ": pbh certificate without failing check");
      return;
    }
    const double s = p->checks[*p->failing].eigenvalue;
    Matrix stacked(n + cm.rows(), n);
    stacked.topRows(n) = s * Matrix::Identity(n, n) - a;
    stacked.bottomRows(cm.rows()) = cm;
    Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeFullV);
    const Vector v = svd.matrixV().col(n - 1);
    const double res = (stacked * v).norm();
    c.expect(res <= 1e-6 * scale, tag + ": [sI-A; C] null residual " + fmt(res));
  } else if (const auto* k = std::get_if<RankCertificate>(&r.certificate)) {
    c.expect(k->rank < static_cast<std::size_t>(n), tag + ": rank certificate is full");
    const Matrix obs = observability_matrix(sys);
    Eigen::JacobiSVD<Matrix> svd(obs);
    const auto& sv = svd.singularValues();
    const double threshold =
        tol.rank_rel * double(std::max(obs.rows(), obs.cols())) * sv(0);
    c.expect(sv(n - 1) <= threshold, tag + ": O has no singular value below threshold");
  } else {
    c.expect(false, tag + ": unexpected certificate kind");
  }
}

Outcome test_agreement() {
  Checker c;
  std::mt19937_64 rng(4004);
  std::normal_distribution<double> g;
  const Tolerance tol;
  int unobservable = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 7;
    const auto planted = oracle::planted_real_spectrum(n, rng);
    const Eigen::Index m = 1 + (trial / 7) % 3;
    Matrix cm(m, static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < cm.size(); ++i) cm.data()[i] = g(rng);
    if (trial % 3 == 0) {
      // Remove one planted eigen-direction from the outputs.
      const auto& e = planted.eigenspaces[static_cast<std::size_t>(trial / 3) % planted.eigenspaces.size()];
      const Vector v = e.col(0).normalized();
      cm -= (cm * v) * v.transpose();
    }
    const LtiSystem sys(planted.a, cm);
    const auto rr = test_rank(sys, tol);
    const auto re = test_eigenvector(sys, tol);
    const auto rp = test_pbh(sys, tol);
    const bool truth = oracle::planted_observable(planted, cm);
    const std::string tag = "pair " + std::to_string(trial);
    c.expect(rr.observable() == re.observable() && re.observable() == rp.observable(),
             tag + ": rank/eigenvector/pbh disagree");
    c.expect(re.observable() == truth, tag + ": verdict differs from the planted truth");
    if (!truth) {
      ++unobservable;
      revalidate(rr, sys, c, tag + " rank");
      revalidate(re, sys, c, tag + " eigenvector");
      revalidate(rp, sys, c, tag + " pbh");
    }
  }
  c.expect(unobservable >= 60, "too few unobservable pairs: " + std::to_string(unobservable));
  return c.outcome("300 pairs, " + std::to_string(unobservable) +
                   " unobservable, all certificates revalidated");
}

// ---- 5 ----------------------------------------------------------------------
Outcome agreement_dynamics() {
  Checker c;
  std::mt19937_64 rng(5005);
  const Tolerance tol;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial % 11;
    const Graph g = random_graph(n, 0.3, rng);
    const std::string tag = "graph " + std::to_string(trial);
    c.expect(!test_rss(-laplacian(g), g, tol).observable(), tag + ": (-L, D^T) observable");
    c.expect(!test_rank(LtiSystem(-laplacian(g), incidence_matrix(g).transpose()), tol).observable(),
             tag + ": rank test calls (-L, D^T) observable");
    for (std::size_t a = 0; a < n; ++a) {
      const auto r = test_anchored_rss(g, AnchorSet({a}, n), tol);
      c.expect(r.observable() && std::get<RankCertificate>(r.certificate).rank == n,
               tag + ": anchor " + std::to_string(a + 1) + " does not give full column rank");
    }
  }
  return c.outcome("50 graphs unobservable; every single anchor gives full column rank");
}

// ---- 6 ----------------------------------------------------------------------
Outcome laplacian_equivalence() {
  Checker c;
  std::mt19937_64 rng(6006);
  const Tolerance tol;
  int unobservable = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 7;
    const auto N = static_cast<Eigen::Index>(n);
    const Graph g = random_graph(n, 0.3, rng);
    Matrix a = oracle::planted_real_spectrum(n, rng).a;
    if (trial % 2 == 0) {
      // Make 1 an eigenvector with eigenvalue s.
      const double s = double(trial % 5) - 2.0;
      a -= (a * Vector::Ones(N) - s * Vector::Ones(N)) * Vector::Ones(N).transpose() / double(n);
    }
    const auto via_d = test_eigenvector(LtiSystem(a, incidence_matrix(g).transpose()), tol);
    const auto via_l = test_eigenvector(LtiSystem(a, laplacian(g)), tol);
    c.expect(via_d.observable() == via_l.observable(),
             "instance " + std::to_string(trial) + ": verdicts differ");
    c.expect(test_laplacian_equivalence(a, g, tol), "instance " + std::to_string(trial));
    unobservable += via_d.observable() ? 0 : 1;
  }
  c.expect(unobservable >= 50, "too few unobservable instances: " + std::to_string(unobservable));
  return c.outcome("200 instances, " + std::to_string(unobservable) + " unobservable");
}

// ---- 7 ----------------------------------------------------------------------
Outcome symmetric_anchors() {
  Checker c;
  const Tolerance tol;
  const auto p3 = classify_anchors(make_path(3));
  c.expect(p3.classes == std::vector<AnchorClass>{AnchorClass::Asymmetric, AnchorClass::Symmetric,
                                                  AnchorClass::Asymmetric},
           "P_3 classification");
  const auto k3 = classify_anchors(make_complete(3));
  c.expect(std::all_of(k3.classes.begin(), k3.classes.end(),
                       [](AnchorClass x) { return x == AnchorClass::Symmetric; }),
           "triangle classification");

  std::vector<Graph> corpus = {make_path(3),  make_path(6),     make_cycle(5), make_cycle(8),
                               make_star(4),  make_complete(5), make_grid(3, 3), make_grid(2, 4)};
  std::mt19937_64 rng(7007);
  while (corpus.size() < 30) corpus.push_back(random_graph(4 + corpus.size() % 7, 0.2, rng));
  int symmetric = 0, undetermined = 0;
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    const Graph& g = corpus[k];
    const auto cls = classify_anchors(g);
    for (std::size_t a = 0; a < g.vertex_count(); ++a) {
      if (cls.classes[a] == AnchorClass::Undetermined) ++undetermined;
      if (cls.classes[a] != AnchorClass::Symmetric) continue;
      ++symmetric;
      c.expect(cls.permutations[a] && cls.permutations[a]->commutes_with_laplacian(g),
               "graph " + std::to_string(k) + ": symmetry does not commute with L");
      c.expect(!test_single_anchor_agreement(g, a, tol).observable(),
               "graph " + std::to_string(k) + " anchor " + std::to_string(a + 1) +
                   " symmetric yet observable");
    }
  }
  c.expect(undetermined == 0, std::to_string(undetermined) + " anchors undetermined");
  return c.outcome("P_3 [asym, sym, asym]; triangle all sym; " + std::to_string(symmetric) +
                   " symmetric anchors over 30 graphs, all unobservable");
}

// ---- 8 ----------------------------------------------------------------------
Outcome positive_definiteness() {
  Checker c;
  std::mt19937_64 rng(8008);
  double smallest = 1e300;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 11;
    const Graph g = random_weighted_graph(n, rng);
    const std::size_t anchor = static_cast<std::size_t>(rng() % n);
    for (double k : {1e-2, 1.0, 1e3}) {
      const ObserverConfig cfg{g, anchor, k, Vector::Zero(static_cast<Eigen::Index>(n))};
      const double lmin = error_decay_rate(cfg);
      smallest = std::min(smallest, lmin);
      c.expect(lmin > 1e-10, "graph " + std::to_string(trial) + " K=" + fmt(k) +
                                 ": lambda_min " + fmt(lmin));
    }
    const ObserverConfig zero{g, anchor, 0.0, Vector::Zero(static_cast<Eigen::Index>(n))};
    const double lmin0 = error_decay_rate(zero);
    c.expect(lmin0 <= 1e-10, "graph " + std::to_string(trial) + " K=0: lambda_min " + fmt(lmin0));
    // An error along 1 is invisible to every sensor and must persist.
    SimulationOptions opts;
    opts.validate_config = false;
    const Vector x0 = Vector::Constant(static_cast<Eigen::Index>(n), 3.0);
    const double dt = 1.0 / error_matrix_spectral_bound(zero);
    const auto tr = simulate(make_constant_plant(x0), zero, dt, 200 * dt, opts);
    const double drift = std::abs(tr.error_norms.back() - tr.error_norms.front());
    c.expect(drift <= 1e-9 * tr.error_norms.front(),
             "graph " + std::to_string(trial) + " K=0: error along 1 changed by " + fmt(drift));
  }
  return c.outcome("300 configs, smallest lambda_min " + fmt(smallest) +
                   "; K=0 singular with persistent 1-direction error");
}

// ---- 9 ----------------------------------------------------------------------
Outcome simulator_vs_exponential() {
  Checker c;
  const Tolerance tol;
  struct Case {
    std::string name;
    Graph graph;
  };
  const std::vector<Case> cases = {{"P_3", make_path(3)},
                                   {"cycle(5)", make_cycle(5)},
                                   {"grid(3,3)", make_grid(3, 3)}};
  double worst = 0.0;
  for (const auto& cs : cases) {
    const std::size_t n = cs.graph.vertex_count();
    const auto N = static_cast<Eigen::Index>(n);
    const ObserverConfig cfg{cs.graph.with_uniform_weight(1.0), n - 1, 1.0, Vector::Zero(N)};
    const Vector x0 = seeded_uniform(n, -1.0, 1.0, 9) + Vector::Ones(N);
    const auto tr = simulate(make_constant_plant(x0), cfg, 1e-3, 10.0);
    const Matrix lam = build_error_matrix(cfg);
    for (double t : {0.1, 1.0, 10.0}) {
      const auto k = static_cast<std::size_t>(std::llround(t / 1e-3));
      if (k >= tr.times.size() || std::abs(tr.times[k] - t) > 1e-9) {
        c.expect(false, cs.name + ": no sample at t=" + fmt(t));
        continue;
      }
      const Vector exact = matrix_exponential_apply(-lam, t, x0, tol);
      const double rel = (tr.states[k] - tr.estimates[k] - exact).norm() / exact.norm();
      worst = std::max(worst, rel);
      c.expect(rel <= 1e-6, cs.name + " t=" + fmt(t) + ": relative error " + fmt(rel));
    }
  }
  return c.outcome("P_3, cycle(5), grid(3,3) at t = 0.1, 1, 10; worst relative error " +
                   fmt(worst));
}

// ---- 10 ---------------------------------------------------------------------
Outcome image_experiment() {
  Checker c;
  ImageExperimentSpec spec;
  spec.image = load_image(std::string(RELSENSE_TEST_DATA) + "/gradient16.pgm");
  spec.weight = 1000.0;
  spec.anchor_gain = 1000.0;
  spec.seed = 42;
  const auto r = run_image_experiment(spec);
  c.expect(r.exact, "rounded final estimates differ from the fixture");
  std::size_t rises = 0;
  for (std::size_t k = 1; k < r.error_norms.size(); ++k) {
    if (r.error_norms[k] > r.error_norms[k - 1]) ++rises;
  }
  c.expect(rises == 0, std::to_string(rises) + " increases in the error norm");
  return c.outcome("16x16 fixture, " + std::to_string(r.error_norms.size() - 1) +
                   " steps, exact reconstruction, error " + fmt(r.error_norms.front()) + " -> " +
                   fmt(r.error_norms.back()));
}

// ---- 11 ---------------------------------------------------------------------
Outcome tracking_experiment() {
  Checker c;
  TrackingExperimentSpec spec;
  spec.agents = 10;
  spec.anchor_gain = 100.0;
  spec.amplitude = 2.0;
  spec.frequency = 5.0;
  spec.control_gain = 30.0;
  const auto base = run_tracking_experiment(spec);
  const auto& tr = base.trace;
  double worst_ratio = 0.0;
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    const double envelope = tr.error_norms[0] * std::exp(-base.lambda_min * tr.times[k]);
    worst_ratio = std::max(worst_ratio, tr.error_norms[k] / envelope);
  }
  c.expect(worst_ratio <= 1.0 + 1e-6, "envelope exceeded by factor " + fmt(worst_ratio));

  double worst_dev = 0.0;
  for (auto [amp, freq] : {std::pair{0.0, 0.0}, std::pair{7.0, 1.0}, std::pair{0.5, 20.0}}) {
    TrackingExperimentSpec other = spec;
    other.amplitude = amp;
    other.frequency = freq;
    const auto alt = run_tracking_experiment(other).trace;
    if (alt.times.size() != tr.times.size()) {
      c.expect(false, "trace lengths differ");
      continue;
    }
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
      const double dev =
          ((tr.states[k] - tr.estimates[k]) - (alt.states[k] - alt.estimates[k])).norm();
      worst_dev = std::max(worst_dev, dev);
    }
  }
  c.expect(worst_dev <= 1e-9, "error depends on the reference by " + fmt(worst_dev));
  return c.outcome("n=10 cycle, K=100, " + std::to_string(tr.times.size()) +
                   " samples, max envelope ratio " + fmt(worst_ratio) +
                   ", reference-induced deviation " + fmt(worst_dev));
}

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;  // <= 0: none
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "cycle-matrix rank law", 1.0, cycle_rank_law},
      {2, "incidence-kernel law", 5.0, incidence_kernel_law},
      {3, "cycle worked examples", 0.0, cycle_examples},
      {4, "rank / eigenvector / PBH agreement", 0.0, test_agreement},
      {5, "agreement dynamics unobservable, anchor repairs", 0.0, agreement_dynamics},
      {6, "incidence / Laplacian equivalence", 0.0, laplacian_equivalence},
      {7, "anchor symmetry classification", 0.0, symmetric_anchors},
      {8, "error matrix positive definiteness", 0.0, positive_definiteness},
      {9, "RK4 trace vs matrix exponential", 10.0, simulator_vs_exponential},
      {10, "image-grid reconstruction", 60.0, image_experiment},
      {11, "sinusoid tracking envelope", 10.0, tracking_experiment},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = cr.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (cr.time_limit_s > 0.0 && secs >= cr.time_limit_s) {
      out.pass = false;
      out.detail += " [runtime " + fmt(secs) + " s exceeds " + fmt(cr.time_limit_s) + " s]";
    }
    std::printf("%s  %2d  %-48s %7.3f s  %s\n", out.pass ? "PASS" : "FAIL", cr.id,
                cr.name.c_str(), secs, out.detail.c_str());
    failed += out.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
