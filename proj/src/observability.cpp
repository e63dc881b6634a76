#include "relsense/observability.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "relsense/error.hpp"

namespace relsense {

namespace {

ObservabilityReport make_report(std::string method, const LtiSystem& sys,
                                const Tolerance& tol) {
  ObservabilityReport r;
  r.method = std::move(method);
  r.tolerance = tol;
  r.state_dim = sys.state_dim();
  r.output_dim = sys.output_dim();
  return r;
}

void note_complex_spectrum(ObservabilityReport& r, std::size_t complex_count) {
  r.complex_eigenvalue_count = complex_count;
  if (complex_count == 0) return;
  r.restricted_to_real_spectrum = true;
  std::ostringstream os;
  os << "A has " << complex_count
     << " eigenvalues with nonzero imaginary part; only real eigenvalues were examined";
  r.diagnostics.push_back(os.str());
}

// Smallest singular direction of C restricted to the eigenspace E.
// Returns the unit vector v = E z minimizing ||C v|| together with that norm.
std::pair<Vector, double> least_observed_direction(const Matrix& c, const Matrix& space) {
  // With a full V the last column is the minimizer, including the wide case
  // where the restriction has a nontrivial kernel.
  const Matrix restricted = c * space;
  const Eigen::Index d = space.cols();
  Eigen::BDCSVD<Matrix> svd(restricted, Eigen::ComputeFullV);
  const Vector z = svd.matrixV().col(d - 1);
  const Vector v = space * z;
  return {v / v.norm(), (c * v).norm() / v.norm()};
}

void require_connected(const Graph& g, const char* what) {
  if (!is_connected(g)) {
    throw PreconditionError(std::string(what) + ": graph must be connected");
  }
}

void require_vertex(std::size_t v, const Graph& g, const char* what) {
  if (v >= g.vertex_count()) {
    std::ostringstream os;
    os << what << ": anchor " << v + 1 << " outside [1, " << g.vertex_count() << "]";
    throw InvalidArgumentError(os.str());
  }
}

}  // namespace

const char* to_string(Verdict v) noexcept {
  return v == Verdict::Observable ? "observable" : "unobservable";
}

const char* to_string(AnchorClass c) noexcept {
  switch (c) {
    case AnchorClass::Symmetric:
      return "symmetric";
    case AnchorClass::Asymmetric:
      return "asymmetric";
    case AnchorClass::Undetermined:
      return "undetermined";
  }
  return "undetermined";
}

LtiSystem::LtiSystem(Matrix a, Matrix c, std::optional<Matrix> b)
    : a_(std::move(a)), c_(std::move(c)), b_(std::move(b)) {
  require_finite(a_, "system A");
  require_finite(c_, "system C");
  if (a_.rows() != a_.cols()) throw InvalidArgumentError("system: A must be square");
  if (c_.cols() != a_.rows()) {
    std::ostringstream os;
    os << "system: C has " << c_.cols() << " columns but A is " << a_.rows() << "x"
       << a_.cols();
    throw InvalidArgumentError(os.str());
  }
  if (b_) {
    require_finite(*b_, "system B");
    if (b_->rows() != a_.rows()) {
      throw InvalidArgumentError("system: B row count must equal the state dimension");
    }
  }
}

Matrix observability_matrix(const LtiSystem& sys) {
  const Eigen::Index n = sys.a().rows();
  const Eigen::Index m = sys.c().rows();
  Matrix obs(n * m, n);
  Matrix block = sys.c();
  for (Eigen::Index k = 0; k < n; ++k) {
    obs.middleRows(k * m, m) = block;
    block = block * sys.a();
  }
  return obs;
}

ObservabilityReport test_rank(const LtiSystem& sys, const Tolerance& tol) {
  tol.validate();
  ObservabilityReport r = make_report("rank", sys, tol);
  const Matrix obs = observability_matrix(sys);
  if (!obs.allFinite()) {
    throw NumericalError("test_rank: observability matrix overflowed");
  }
  RankCertificate cert{rank(obs, tol), static_cast<std::size_t>(obs.rows()),
                       static_cast<std::size_t>(obs.cols())};
  r.verdict = cert.rank == sys.state_dim() ? Verdict::Observable : Verdict::Unobservable;
  r.certificate = cert;
  return r;
}

ObservabilityReport test_eigenvector(const LtiSystem& sys, const Tolerance& tol) {
  tol.validate();
  ObservabilityReport r = make_report("eigenvector", sys, tol);
  const GeneralEigenDecomposition eig = general_eigen(sys.a(), tol);
  note_complex_spectrum(r, eig.complex_count);

  SpectrumChecked checked;
  for (const RealEigenvalue& ev : eig.real) {
    checked.eigenvalues.push_back(ev.value);
    auto [v, residual] = least_observed_direction(sys.c(), ev.eigenspace);
    if (residual <= tol.zero_abs) {
      r.verdict = Verdict::Unobservable;
      r.certificate = EigenvectorWitness{ev.value, normalize_direction(v, tol.zero_abs),
                                         static_cast<std::size_t>(ev.eigenspace.cols())};
      return r;
    }
  }
  r.verdict = Verdict::Observable;
  r.certificate = std::move(checked);
  return r;
}

ObservabilityReport test_pbh(const LtiSystem& sys, const Tolerance& tol) {
  tol.validate();
  ObservabilityReport r = make_report("pbh", sys, tol);
  const GeneralEigenDecomposition eig = general_eigen(sys.a(), tol);
  note_complex_spectrum(r, eig.complex_count);

  const Eigen::Index n = sys.a().rows();
  const Eigen::Index m = sys.c().rows();
  PbhCertificate cert;
  cert.rows = static_cast<std::size_t>(n + m);
  cert.cols = static_cast<std::size_t>(n);
  Matrix stacked(n + m, n);
  stacked.bottomRows(m) = sys.c();
  for (const RealEigenvalue& ev : eig.real) {
    stacked.topRows(n) = ev.value * Matrix::Identity(n, n) - sys.a();
    const std::size_t rk = rank(stacked, tol);
    cert.checks.push_back({ev.value, rk});
    if (rk != static_cast<std::size_t>(n) && !cert.failing) {
      cert.failing = cert.checks.size() - 1;
    }
  }
  r.verdict = cert.failing ? Verdict::Unobservable : Verdict::Observable;
  r.certificate = std::move(cert);
  return r;
}

KernelIntersection test_kernel_intersection(const Matrix& m1, const Matrix& m2,
                                            const Tolerance& tol) {
  tol.validate();
  require_finite(m1, "kernel intersection M1");
  require_finite(m2, "kernel intersection M2");
  if (m1.cols() != m2.cols()) {
    throw InvalidArgumentError("test_kernel_intersection: column counts differ");
  }
  Matrix stacked(m1.rows() + m2.rows(), m1.cols());
  stacked << m1, m2;
  const Matrix kernel = nullspace_matrix(stacked, tol);
  KernelIntersection out;
  out.dimension = static_cast<std::size_t>(kernel.cols());
  out.nontrivial = out.dimension > 0;
  if (out.nontrivial) out.witness = normalize_direction(kernel.col(0), tol.zero_abs);
  return out;
}

ObservabilityReport test_rss(const Matrix& a, const Graph& g, const Tolerance& tol) {
  tol.validate();
  require_connected(g, "test_rss");
  if (g.vertex_count() < 2) {
    throw PreconditionError("test_rss: relative sensing needs at least two vertices");
  }
  require_finite(a, "test_rss A");
  if (a.rows() != a.cols() || static_cast<std::size_t>(a.rows()) != g.vertex_count()) {
    throw InvalidArgumentError("test_rss: A must be square with the graph's vertex count");
  }

  const LtiSystem sys(a, incidence_matrix(g).transpose());
  ObservabilityReport eig_route = test_eigenvector(sys, tol);

  const Vector ones = Vector::Ones(a.rows());
  const Vector image = a * ones;
  RssCertificate cert;
  cert.span_eigenvalue = image.mean();
  cert.span_residual = (image - cert.span_eigenvalue * ones).norm();
  cert.span_test_unobservable =
      cert.span_residual <= tol.zero_abs * (1.0 + matrix_norm(a)) * ones.norm();
  if (auto* w = std::get_if<EigenvectorWitness>(&eig_route.certificate)) cert.witness = *w;

  ObservabilityReport r = make_report("rss", sys, tol);
  r.verdict = eig_route.verdict;
  r.complex_eigenvalue_count = eig_route.complex_eigenvalue_count;
  r.restricted_to_real_spectrum = eig_route.restricted_to_real_spectrum;
  r.diagnostics = eig_route.diagnostics;
  const bool span_verdict_unobservable = cert.span_test_unobservable;
  if (span_verdict_unobservable != (r.verdict == Verdict::Unobservable)) {
    r.diagnostics.push_back(
        "span(1) test and eigenvector test on (A, D^T) disagree; verdict follows the "
        "eigenvector test");
  }
  r.certificate = std::move(cert);
  return r;
}

ObservabilityReport test_anchored_rss(const Graph& g, const AnchorSet& anchors,
                                      const Tolerance& tol) {
  tol.validate();
  require_connected(g, "test_anchored_rss");
  for (std::size_t i : anchors.indices()) require_vertex(i, g, "test_anchored_rss");
  const Eigen::Index n = static_cast<Eigen::Index>(g.vertex_count());
  const Matrix rel = incidence_matrix(g).transpose();
  const Matrix anchor_part = anchor_rows(anchors, g.vertex_count());
  Matrix stacked(rel.rows() + anchor_part.rows(), n);
  stacked << rel, anchor_part;

  // The state matrix plays no role; record it as zero for the report.
  const LtiSystem sys(Matrix::Zero(n, n), stacked);
  ObservabilityReport r = make_report("anchored", sys, tol);
  RankCertificate cert{rank(stacked, tol), static_cast<std::size_t>(stacked.rows()),
                       static_cast<std::size_t>(n)};
  r.verdict = cert.rank == g.vertex_count() ? Verdict::Observable : Verdict::Unobservable;
  r.certificate = cert;
  r.diagnostics.push_back(
      "full column rank of the observation map makes the verdict independent of the state "
      "matrix");
  return r;
}

bool test_laplacian_equivalence(const Matrix& a, const Graph& g, const Tolerance& tol) {
  require_connected(g, "test_laplacian_equivalence");
  if (g.vertex_count() < 2) {
    throw PreconditionError("test_laplacian_equivalence: need at least two vertices");
  }
  const auto via_incidence = test_eigenvector(LtiSystem(a, incidence_matrix(g).transpose()), tol);
  const auto via_laplacian = test_eigenvector(LtiSystem(a, laplacian(g)), tol);
  return via_incidence.verdict == via_laplacian.verdict;
}

ObservabilityReport test_single_anchor_agreement(const Graph& g, std::size_t anchor,
                                                 const Tolerance& tol) {
  tol.validate();
  require_vertex(anchor, g, "test_single_anchor_agreement");
  require_connected(g, "test_single_anchor_agreement");

  const Matrix lap = laplacian(g);
  const Eigen::Index n = lap.rows();
  Matrix obs_row = Matrix::Zero(1, n);
  obs_row(0, static_cast<Eigen::Index>(anchor)) = 1.0;
  const LtiSystem sys(-lap, obs_row);
  ObservabilityReport r = make_report("single-anchor", sys, tol);

  const SymmetricEigenDecomposition eig = symmetric_eigen(lap, tol);
  const double window = tol.cluster_width() * (1.0 + matrix_norm(lap));

  // Group the ascending spectrum into clusters of (numerically) equal values.
  struct Cluster {
    Eigen::Index begin;
    Eigen::Index size;
  };
  std::vector<Cluster> clusters;
  for (Eigen::Index i = 0; i < n;) {
    Eigen::Index j = i + 1;
    while (j < n && eig.eigenvalues(j) - eig.eigenvalues(j - 1) <= window) ++j;
    clusters.push_back({i, j - i});
    i = j;
  }

  // Visit in ascending order of A = -L, i.e. descending Laplacian eigenvalue.
  SpectrumChecked checked;
  for (auto it = clusters.rbegin(); it != clusters.rend(); ++it) {
    const Matrix space = eig.eigenvectors.middleCols(it->begin, it->size);
    const double lambda = eig.eigenvalues.segment(it->begin, it->size).mean();
    checked.eigenvalues.push_back(-lambda);
    const Matrix anchor_entries = space.row(static_cast<Eigen::Index>(anchor));

    SingleAnchorWitness w;
    w.anchor = anchor;
    w.laplacian_eigenvalue = lambda;
    w.eigenspace_dimension = static_cast<std::size_t>(it->size);
    if (it->size >= 2) {
      // A d-dimensional eigenspace always meets the hyperplane x_anchor = 0.
      w.reason = SingleAnchorReason::RepeatedEigenvalue;
      Vector z = Vector::Zero(it->size);
      if (anchor_entries.norm() <= tol.zero_abs) {
        z(0) = 1.0;
      } else {
        Eigen::BDCSVD<Matrix> svd(anchor_entries, Eigen::ComputeFullV);
        z = svd.matrixV().col(it->size - 1);
      }
      w.witness = normalize_direction(space * z, tol.zero_abs);
    } else if (std::abs(anchor_entries(0, 0)) <= tol.zero_abs) {
      w.reason = SingleAnchorReason::ZeroComponent;
      w.witness = normalize_direction(space.col(0), tol.zero_abs);
    } else {
      continue;
    }
    r.verdict = Verdict::Unobservable;
    r.certificate = std::move(w);
    return r;
  }
  r.verdict = Verdict::Observable;
  r.certificate = std::move(checked);
  return r;
}

}  // namespace relsense
