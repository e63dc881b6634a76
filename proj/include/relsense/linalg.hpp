#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace relsense {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Numerical tolerance policy shared by every module.
///
/// A singular value counts toward the rank when
/// `sigma > rank_rel * max(rows, cols) * sigma_max`; `zero_abs` is the
/// absolute threshold for treating a scalar (or residual norm) as zero.
struct Tolerance {
  double rank_rel = 1e-9;
  double zero_abs = 1e-8;

  /// Throws InvalidArgumentError unless 0 < rank_rel < 1 and zero_abs > 0.
  void validate() const;

  /// Width of the window inside which two computed eigenvalues are treated
  /// as one repeated eigenvalue, scaled by (1 + ||M||).
  double cluster_width() const;
};

struct SymmetricEigenDecomposition {
  Vector eigenvalues;   // ascending
  Matrix eigenvectors;  // orthonormal columns, paired with eigenvalues
};

/// One distinct real eigenvalue of a general square matrix.
struct RealEigenvalue {
  double value = 0.0;
  std::size_t algebraic_multiplicity = 0;
  Vector eigenvector;  // representative, normalized
  Matrix eigenspace;   // orthonormal basis of null(value*I - M)
};

struct GeneralEigenDecomposition {
  std::vector<RealEigenvalue> real;  // ascending by value
  std::size_t complex_count = 0;     // eigenvalues with nonzero imaginary part
};

/// Frobenius norm, used wherever a bound is scaled by "||M||".
double matrix_norm(const Matrix& m);

/// Throws InvalidArgumentError if the matrix is empty or holds NaN/inf.
void require_finite(const Matrix& m, std::string_view what);
void require_finite(const Vector& v, std::string_view what);

/// Unit Euclidean norm with the first entry whose magnitude exceeds
/// `zero_abs` made positive. Zero vectors are returned unchanged.
Vector normalize_direction(const Vector& v, double zero_abs);

std::size_t rank(const Matrix& m, const Tolerance& tol);

/// Orthonormal kernel basis, one vector per nullity dimension.
std::vector<Vector> nullspace_basis(const Matrix& m, const Tolerance& tol);

/// Same basis packed as the columns of a cols x nullity matrix.
Matrix nullspace_matrix(const Matrix& m, const Tolerance& tol);

/// Rejects inputs that are not symmetric to within zero_abs * (1 + ||M||).
SymmetricEigenDecomposition symmetric_eigen(const Matrix& m, const Tolerance& tol);

GeneralEigenDecomposition general_eigen(const Matrix& m, const Tolerance& tol);

/// exp(M t) v. Symmetric M uses the spectral route, everything else
/// scaling-and-squaring on a truncated Taylor series.
Vector matrix_exponential_apply(const Matrix& m, double t, const Vector& v,
                                const Tolerance& tol);

bool is_symmetric(const Matrix& m, const Tolerance& tol);

}  // namespace relsense
