#pragma once

#include <vector>

#include "secidx/model.hpp"
#include "secidx/subsets.hpp"

namespace secidx {

/// Univariate polynomial with coefficients in ascending degree order.
/// The zero polynomial has no coefficients.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Scalar> coefficients);
  static Polynomial constant(Scalar c) { return Polynomial({c}); }
  /// xi - root
  static Polynomial linear(Scalar root) { return Polynomial({-root, 1.0}); }

  const std::vector<Scalar>& coefficients() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  Scalar leading() const { return coeffs_.back(); }
  Scalar operator()(Scalar x) const;
  double max_abs_coefficient() const;

  /// Drop leading coefficients at or below rel_tol times the largest one.
  Polynomial trimmed(double rel_tol) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(Scalar s) const;
  Polynomial operator-() const { return *this * Scalar(-1.0); }

  /// Roots via the eigenvalues of the companion matrix.
  std::vector<Scalar> roots() const;

 private:
  std::vector<Scalar> coeffs_;
};

/// Euclidean remainder with trimming at rel_tol.
Polynomial poly_remainder(const Polynomial& a, const Polynomial& b, double rel_tol);
/// Monic GCD by the Euclidean algorithm. Numerically fragile; used as a cross-check.
Polynomial poly_gcd(const Polynomial& a, const Polynomial& b, double rel_tol);

class PolyMatrix {
 public:
  PolyMatrix(std::size_t rows, std::size_t cols);
  explicit PolyMatrix(std::vector<std::vector<Polynomial>> entries);
  /// Constant matrix.
  static PolyMatrix from_constant(const Matrix& m);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const Polynomial& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
  Polynomial& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }

  int degree() const;
  Matrix evaluate(Scalar x) const;
  /// Coefficient matrix of xi^k.
  Matrix coefficient(int k) const;
  double max_abs_coefficient() const;

  /// Columns in `cols` (1-based, ascending).
  PolyMatrix select_columns(const SensorSet& cols) const;
  PolyMatrix select_rows(const std::vector<std::size_t>& rows) const;
  /// Constant matrix times this one.
  PolyMatrix left_multiply(const Matrix& m) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Polynomial> entries_;
};

/// Determinant of a square polynomial matrix by cofactor expansion.
Polynomial determinant(const PolyMatrix& m);

/// All q x q minors of a p x q matrix, rows chosen in lexicographic order.
std::vector<Polynomial> maximal_minors(const PolyMatrix& m);

/// Full column rank at every complex point. Candidate common roots come from
/// the lowest-degree nonzero maximal minor; each is confirmed by a rank test
/// of M(lambda).
bool is_left_unimodular(const PolyMatrix& m, const ToleranceConfig& tol = {});

/// Left-unimodularity decided from the GCD of the maximal minors. Cross-check only.
bool is_left_unimodular_gcd(const PolyMatrix& m, const ToleranceConfig& tol = {});

/// Smallest column-subset size whose submatrix is not left unimodular.
std::size_t security_index_from_R(const PolyMatrix& r, const ToleranceConfig& tol = {},
                                  subsets::Execution exec = subsets::default_execution());

/// s(t) = sum_k R_k r(t+k) for t = 0..T-d-1.
Trajectory apply_shift_polynomial(const PolyMatrix& r, const Trajectory& traj);

}  // namespace secidx
