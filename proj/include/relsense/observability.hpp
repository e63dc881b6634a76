#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "relsense/graph.hpp"
#include "relsense/linalg.hpp"

namespace relsense {

/// x' = A x + B u,  y = C x.
class LtiSystem {
 public:
  LtiSystem(Matrix a, Matrix c, std::optional<Matrix> b = std::nullopt);

  const Matrix& a() const noexcept { return a_; }
  const Matrix& c() const noexcept { return c_; }
  const std::optional<Matrix>& b() const noexcept { return b_; }
  std::size_t state_dim() const noexcept { return static_cast<std::size_t>(a_.rows()); }
  std::size_t output_dim() const noexcept { return static_cast<std::size_t>(c_.rows()); }

 private:
  Matrix a_;
  Matrix c_;
  std::optional<Matrix> b_;
};

enum class Verdict { Observable, Unobservable };

const char* to_string(Verdict v) noexcept;

// ---- certificates -------------------------------------------------------

struct RankCertificate {
  std::size_t rank = 0;
  std::size_t rows = 0;  // of the matrix whose rank was taken
  std::size_t cols = 0;
};

/// An eigenvector of A in the kernel of C (unobservable verdicts).
struct EigenvectorWitness {
  double eigenvalue = 0.0;
  Vector witness;
  std::size_t eigenspace_dimension = 0;
};

/// Real eigenvalues examined without finding a witness (observable verdicts).
struct SpectrumChecked {
  std::vector<double> eigenvalues;
};

struct PbhCheck {
  double eigenvalue = 0.0;
  std::size_t rank = 0;
};

struct PbhCertificate {
  std::vector<PbhCheck> checks;      // one per distinct real eigenvalue
  std::size_t rows = 0;              // n + m
  std::size_t cols = 0;              // n
  std::optional<std::size_t> failing;  // index into checks
};

struct RssCertificate {
  bool span_test_unobservable = false;  // A 1 = s 1 holds
  double span_eigenvalue = 0.0;         // s = mean of A 1
  double span_residual = 0.0;           // ||A 1 - s 1||
  std::optional<EigenvectorWitness> witness;  // from the (A, D^T) eigenvector route
};

enum class SingleAnchorReason { ZeroComponent, RepeatedEigenvalue };

struct SingleAnchorWitness {
  SingleAnchorReason reason = SingleAnchorReason::ZeroComponent;
  std::size_t anchor = 0;                  // 0-based
  double laplacian_eigenvalue = 0.0;       // lambda of L; A = -L has -lambda
  std::size_t eigenspace_dimension = 0;
  Vector witness;
};

using Certificate = std::variant<RankCertificate, EigenvectorWitness, SpectrumChecked,
                                 PbhCertificate, RssCertificate, SingleAnchorWitness>;

struct ObservabilityReport {
  Verdict verdict = Verdict::Observable;
  std::string method;  // rank | eigenvector | pbh | rss | anchored | single-anchor
  Certificate certificate;
  Tolerance tolerance;
  std::size_t state_dim = 0;
  std::size_t output_dim = 0;
  std::size_t complex_eigenvalue_count = 0;
  /// Set when A has complex eigenvalues: only real s were examined.
  bool restricted_to_real_spectrum = false;
  std::vector<std::string> diagnostics;

  bool observable() const noexcept { return verdict == Verdict::Observable; }
};

// ---- tests ---------------------------------------------------------------

/// [C; CA; ...; CA^{n-1}], nm x n.
Matrix observability_matrix(const LtiSystem& sys);

ObservabilityReport test_rank(const LtiSystem& sys, const Tolerance& tol);

/// Unobservable iff some real eigenvector v of A has ||C v|| <= zero_abs ||v||.
/// Repeated eigenvalues are handled by searching the whole eigenspace.
ObservabilityReport test_eigenvector(const LtiSystem& sys, const Tolerance& tol);

/// rank [sI - A; C] at every distinct real eigenvalue s of A.
ObservabilityReport test_pbh(const LtiSystem& sys, const Tolerance& tol);

struct KernelIntersection {
  bool nontrivial = false;
  std::size_t dimension = 0;
  Vector witness;  // unit vector in both kernels when nontrivial
};

KernelIntersection test_kernel_intersection(const Matrix& m1, const Matrix& m2,
                                            const Tolerance& tol);

/// (A, D^T) for a connected graph: the span test on 1_n, cross-checked
/// against test_eigenvector on (A, D^T). A disagreement is reported as a
/// diagnostic; the verdict follows the eigenvector route.
ObservabilityReport test_rss(const Matrix& a, const Graph& g, const Tolerance& tol);

/// [D^T; e_i ...] has full column rank for any A once one anchor is present.
ObservabilityReport test_anchored_rss(const Graph& g, const AnchorSet& anchors,
                                      const Tolerance& tol);

/// True when (A, D^T) and (A, L) receive the same verdict.
bool test_laplacian_equivalence(const Matrix& a, const Graph& g, const Tolerance& tol);

/// Single-measurement agreement dynamics (-L, e_anchor).
ObservabilityReport test_single_anchor_agreement(const Graph& g, std::size_t anchor,
                                                 const Tolerance& tol);

// ---- anchor symmetry -----------------------------------------------------

/// Bijection i -> mapping[i] on 0-based vertices. As a matrix, P(i, mapping[i]) = 1.
class PermutationMatrix {
 public:
  explicit PermutationMatrix(std::vector<std::size_t> mapping);

  std::size_t size() const noexcept { return mapping_.size(); }
  const std::vector<std::size_t>& mapping() const noexcept { return mapping_; }
  std::size_t operator()(std::size_t i) const { return mapping_.at(i); }
  bool is_identity() const noexcept;
  Matrix to_matrix() const;

  /// Exact integer check of P L == L P.
  bool commutes_with_laplacian(const Graph& g) const;

 private:
  std::vector<std::size_t> mapping_;
};

enum class SymmetryOutcome { Found, None, BudgetExceeded };

struct SymmetrySearchResult {
  SymmetryOutcome outcome = SymmetryOutcome::None;
  std::optional<PermutationMatrix> permutation;
  std::size_t nodes_explored = 0;
};

inline constexpr std::size_t kDefaultSymmetryBudget = 2'000'000;

/// Non-identity automorphism of the (unweighted) graph fixing `anchor`,
/// found by refinement plus backtracking in a fixed exploration order.
SymmetrySearchResult find_anchor_symmetry(const Graph& g, std::size_t anchor,
                                          std::size_t budget = kDefaultSymmetryBudget);

enum class AnchorClass { Symmetric, Asymmetric, Undetermined };

const char* to_string(AnchorClass c) noexcept;

struct AnchorClassification {
  std::vector<AnchorClass> classes;
  std::vector<std::optional<PermutationMatrix>> permutations;
};

AnchorClassification classify_anchors(const Graph& g,
                                      std::size_t budget = kDefaultSymmetryBudget);

}  // namespace relsense
