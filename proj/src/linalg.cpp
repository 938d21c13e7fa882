#include "secidx/linalg.hpp"

#include <algorithm>

namespace secidx::linalg {

Eigen::VectorXd singular_values(const Matrix& m) {
  if (m.size() == 0) return Eigen::VectorXd();
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues();
}

std::size_t rank(const Matrix& m, double rank_tol, double scale) {
  if (m.size() == 0) return 0;
  const Eigen::VectorXd sv = singular_values(m);
  const double reference = scale > 0.0 ? scale : sv(0);
  const double cutoff = zero_threshold(rank_tol, m.rows(), m.cols(), reference);
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++r;
  }
  return r;
}

bool has_kernel(const Matrix& m, double rank_tol, double scale) {
  if (m.cols() == 0) return false;
  return rank(m, rank_tol, scale) < static_cast<std::size_t>(m.cols());
}

Vector smallest_right_singular_vector(const Matrix& m) {
  const Eigen::Index n = m.cols();
  if (m.rows() == 0) {
    Vector e = Vector::Zero(n);
    e(0) = 1.0;
    return e;
  }
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  // Singular values are sorted descending; with rows < cols the trailing
  // columns of V span a kernel that has no singular value of its own.
  return svd.matrixV().col(n - 1);
}

Matrix kernel_basis(const Matrix& m, double rank_tol, double scale) {
  const Eigen::Index n = m.cols();
  if (m.rows() == 0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const std::size_t r = rank(m, rank_tol, scale);
  return svd.matrixV().rightCols(n - static_cast<Eigen::Index>(r));
}

Matrix left_null_rows(const Matrix& m, double rank_tol, double scale) {
  const Eigen::Index rows = m.rows();
  if (m.cols() == 0) return Matrix::Identity(rows, rows);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU);
  const std::size_t r = rank(m, rank_tol, scale);
  return svd.matrixU().rightCols(rows - static_cast<Eigen::Index>(r)).adjoint();
}

Vector least_squares(const Matrix& m, const Vector& b) {
  return m.completeOrthogonalDecomposition().solve(b);
}

double max_abs(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

}  // namespace secidx::linalg
