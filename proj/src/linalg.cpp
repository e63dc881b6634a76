#include "relsense/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "relsense/error.hpp"

namespace relsense {

namespace {

struct Svd {
  Vector singular_values;
  Matrix v;  // full right singular vectors
};

Svd full_svd(const Matrix& m) {
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullV);
  return {svd.singularValues(), svd.matrixV()};
}

std::size_t count_above_threshold(const Vector& sigma, std::size_t rows, std::size_t cols,
                                  const Tolerance& tol) {
  if (sigma.size() == 0) return 0;
  const double sigma_max = sigma(0);
  if (sigma_max <= 0.0) return 0;
  const double threshold =
      tol.rank_rel * static_cast<double>(std::max(rows, cols)) * sigma_max;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > threshold) ++r;
  }
  return r;
}

void require_nonempty(const Matrix& m, std::string_view what) {
  if (m.rows() == 0 || m.cols() == 0) {
    throw InvalidArgumentError(std::string(what) + ": matrix has a zero dimension");
  }
}

void require_square(const Matrix& m, std::string_view what) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << ": expected a square matrix, got " << m.rows() << "x" << m.cols();
    throw InvalidArgumentError(os.str());
  }
}

// Orthonormal basis for null(m) where singular values below `abs_threshold`
// (or the relative rank threshold, whichever is larger) count as zero.
Matrix nullspace_with_floor(const Matrix& m, const Tolerance& tol, double abs_threshold) {
  const Svd svd = full_svd(m);
  std::size_t r = count_above_threshold(svd.singular_values, m.rows(), m.cols(), tol);
  while (r > 0 && svd.singular_values(static_cast<Eigen::Index>(r) - 1) <= abs_threshold) --r;
  const Eigen::Index cols = m.cols();
  Matrix basis = svd.v.rightCols(cols - static_cast<Eigen::Index>(r));
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    basis.col(j) = normalize_direction(basis.col(j), tol.zero_abs);
  }
  return basis;
}

Matrix expm_taylor(const Matrix& x) {
  // Scale until ||x||_1 <= 1/2, sum the series, then square back up.
  const double norm1 = x.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
  const Matrix scaled = x / std::ldexp(1.0, squarings);

  const Eigen::Index n = x.rows();
  Matrix result = Matrix::Identity(n, n);
  Matrix term = Matrix::Identity(n, n);
  for (int k = 1; k <= 40; ++k) {
    term = term * scaled / static_cast<double>(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() <= 1e-18 * result.cwiseAbs().maxCoeff()) break;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

}  // namespace

void Tolerance::validate() const {
  if (!(rank_rel > 0.0 && rank_rel < 1.0)) {
    throw InvalidArgumentError("tolerance: rank_rel must lie in (0, 1)");
  }
  if (!(zero_abs > 0.0) || !std::isfinite(zero_abs)) {
    throw InvalidArgumentError("tolerance: zero_abs must be positive");
  }
}

double Tolerance::cluster_width() const { return 1e-2 * std::sqrt(zero_abs); }

double matrix_norm(const Matrix& m) { return m.norm(); }

void require_finite(const Matrix& m, std::string_view what) {
  require_nonempty(m, what);
  if (!m.allFinite()) {
    throw InvalidArgumentError(std::string(what) + ": matrix contains non-finite entries");
  }
}

void require_finite(const Vector& v, std::string_view what) {
  if (v.size() == 0) throw InvalidArgumentError(std::string(what) + ": empty vector");
  if (!v.allFinite()) {
    throw InvalidArgumentError(std::string(what) + ": vector contains non-finite entries");
  }
}

Vector normalize_direction(const Vector& v, double zero_abs) {
  const double len = v.norm();
  if (len == 0.0) return v;
  Vector u = v / len;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (std::abs(u(i)) > zero_abs) {
      if (u(i) < 0.0) u = -u;
      break;
    }
  }
  return u;
}

bool is_symmetric(const Matrix& m, const Tolerance& tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.transpose()).norm() <= tol.zero_abs * (1.0 + matrix_norm(m));
}

std::size_t rank(const Matrix& m, const Tolerance& tol) {
  require_finite(m, "rank");
  Eigen::BDCSVD<Matrix> svd(m);
  return count_above_threshold(svd.singularValues(), m.rows(), m.cols(), tol);
}

Matrix nullspace_matrix(const Matrix& m, const Tolerance& tol) {
  require_finite(m, "nullspace_basis");
  return nullspace_with_floor(m, tol, 0.0);
}

std::vector<Vector> nullspace_basis(const Matrix& m, const Tolerance& tol) {
  const Matrix basis = nullspace_matrix(m, tol);
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(basis.cols()));
  for (Eigen::Index j = 0; j < basis.cols(); ++j) out.emplace_back(basis.col(j));
  return out;
}

SymmetricEigenDecomposition symmetric_eigen(const Matrix& m, const Tolerance& tol) {
  require_finite(m, "symmetric_eigen");
  require_square(m, "symmetric_eigen");
  const double asym = (m - m.transpose()).norm();
  if (asym > tol.zero_abs * (1.0 + matrix_norm(m))) {
    std::ostringstream os;
    os << "symmetric_eigen: input is not symmetric (||M - M^T|| = " << asym << ")";
    throw PreconditionError(os.str());
  }
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("symmetric_eigen: eigensolver did not converge");
  }
  SymmetricEigenDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index j = 0; j < out.eigenvectors.cols(); ++j) {
    out.eigenvectors.col(j) = normalize_direction(out.eigenvectors.col(j), tol.zero_abs);
  }
  return out;
}

GeneralEigenDecomposition general_eigen(const Matrix& m, const Tolerance& tol) {
  require_finite(m, "general_eigen");
  require_square(m, "general_eigen");
  const double scale = 1.0 + matrix_norm(m);
  const double window = tol.cluster_width() * scale;

  Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("general_eigen: eigensolver did not converge");
  }
  const auto values = solver.eigenvalues();
  const auto vectors = solver.eigenvectors();

  struct Candidate {
    double value;
    Eigen::Index index;
  };
  std::vector<Candidate> real;
  GeneralEigenDecomposition out;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (std::abs(values(i).imag()) <= window) {
      real.push_back({values(i).real(), i});
    } else {
      ++out.complex_count;
    }
  }
  std::sort(real.begin(), real.end(),
            [](const Candidate& a, const Candidate& b) { return a.value < b.value; });

  const Eigen::Index n = m.rows();
  std::size_t begin = 0;
  while (begin < real.size()) {
    std::size_t end = begin + 1;
    while (end < real.size() && real[end].value - real[end - 1].value <= window) ++end;

    double mean = 0.0;
    for (std::size_t k = begin; k < end; ++k) mean += real[k].value;
    mean /= static_cast<double>(end - begin);

    const Matrix shifted = mean * Matrix::Identity(n, n) - m;
    Matrix space = nullspace_with_floor(shifted, tol, window);
    if (space.cols() == 0) {
      // Defective clusters can leave every singular value above the floor;
      // fall back to the solver's own eigenvector.
      space = normalize_direction(vectors.col(real[begin].index).real(), tol.zero_abs);
    }
    RealEigenvalue ev;
    ev.algebraic_multiplicity = end - begin;
    ev.eigenspace = space;
    // Rayleigh quotient over the eigenspace sharpens the cluster mean.
    ev.value = (space.transpose() * m * space).trace() / static_cast<double>(space.cols());
    ev.eigenvector = normalize_direction(space.col(0), tol.zero_abs);
    out.real.push_back(std::move(ev));
    begin = end;
  }
  return out;
}

Vector matrix_exponential_apply(const Matrix& m, double t, const Vector& v,
                                const Tolerance& tol) {
  require_finite(m, "matrix_exponential_apply");
  require_square(m, "matrix_exponential_apply");
  require_finite(v, "matrix_exponential_apply");
  if (v.size() != m.rows()) {
    throw InvalidArgumentError("matrix_exponential_apply: vector dimension mismatch");
  }
  if (!std::isfinite(t)) throw InvalidArgumentError("matrix_exponential_apply: t not finite");

  Vector result;
  if (is_symmetric(m, tol)) {
    const SymmetricEigenDecomposition eig = symmetric_eigen(m, tol);
    const Vector coeffs = eig.eigenvectors.transpose() * v;
    const Vector scaled = (eig.eigenvalues.array() * t).exp() * coeffs.array();
    result = eig.eigenvectors * scaled;
  } else {
    result = expm_taylor(m * t) * v;
  }
  if (!result.allFinite()) {
    throw NumericalError("matrix_exponential_apply: result overflowed");
  }
  return result;
}

}  // namespace relsense
