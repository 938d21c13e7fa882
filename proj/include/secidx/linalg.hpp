#pragma once

#include "secidx/model.hpp"

namespace secidx::linalg {

/// Threshold below which a singular value of an m x n matrix with largest
/// singular value `sigma_max` is treated as zero.
inline double zero_threshold(double rank_tol, Eigen::Index rows, Eigen::Index cols,
                             double sigma_max) {
  return rank_tol * static_cast<double>(std::max(rows, cols)) * sigma_max;
}

Eigen::VectorXd singular_values(const Matrix& m);

/// Numerical rank. When `scale` is positive it replaces the matrix's own
/// sigma_max as the reference magnitude.
std::size_t rank(const Matrix& m, double rank_tol, double scale = 0.0);

/// True iff the matrix has a nonzero kernel vector under the rank tolerance.
/// A matrix with zero rows has kernel equal to the whole space.
bool has_kernel(const Matrix& m, double rank_tol, double scale = 0.0);

/// Unit vector minimizing |m x|: the right singular vector of the smallest singular value.
Vector smallest_right_singular_vector(const Matrix& m);

/// Orthonormal basis (columns) of ker(m).
Matrix kernel_basis(const Matrix& m, double rank_tol, double scale = 0.0);

/// Rows form an orthonormal basis of the left null space {h : h^H m = 0}, returned as H with H m = 0.
Matrix left_null_rows(const Matrix& m, double rank_tol, double scale = 0.0);

/// Least-squares solution of m x = b by complete orthogonal decomposition.
Vector least_squares(const Matrix& m, const Vector& b);

double max_abs(const Matrix& m);

}  // namespace secidx::linalg
