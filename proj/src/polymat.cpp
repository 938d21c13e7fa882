#include "secidx/polymat.hpp"

#include <algorithm>
#include <cmath>

#include "secidx/linalg.hpp"

namespace secidx {

namespace {

constexpr double kTrimTol = 1e-10;
constexpr double kGcdTol = 1e-8;

Polynomial trimmed_below(const Polynomial& p, double threshold) {
  std::vector<Scalar> c = p.coefficients();
  while (!c.empty() && std::abs(c.back()) <= threshold) c.pop_back();
  return Polynomial(std::move(c));
}

}  // namespace

Polynomial::Polynomial(std::vector<Scalar> coefficients) : coeffs_(std::move(coefficients)) {
  for (const Scalar& c : coeffs_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw Error(ErrorCode::NonFinite, "polynomial coefficient is NaN or Inf");
    }
  }
  while (!coeffs_.empty() && coeffs_.back() == Scalar(0.0)) coeffs_.pop_back();
}

Scalar Polynomial::operator()(Scalar x) const {
  Scalar acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double Polynomial::max_abs_coefficient() const {
  double m = 0.0;
  for (const Scalar& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

Polynomial Polynomial::trimmed(double rel_tol) const {
  return trimmed_below(*this, rel_tol * max_abs_coefficient());
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<Scalar> c(std::max(coeffs_.size(), o.coeffs_.size()), 0.0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) c[i] += coeffs_[i];
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) c[i] += o.coeffs_[i];
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (is_zero() || o.is_zero()) return {};
  std::vector<Scalar> c(coeffs_.size() + o.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j) c[i + j] += coeffs_[i] * o.coeffs_[j];
  }
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator*(Scalar s) const {
  std::vector<Scalar> c = coeffs_;
  for (Scalar& v : c) v *= s;
  return Polynomial(std::move(c));
}

std::vector<Scalar> Polynomial::roots() const {
  const int d = degree();
  if (d < 1) return {};
  Matrix companion = Matrix::Zero(d, d);
  for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) companion(i, d - 1) = -coeffs_[static_cast<std::size_t>(i)] / leading();
  Eigen::ComplexEigenSolver<Matrix> solver(companion, false);
  const Vector ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

Polynomial poly_remainder(const Polynomial& a, const Polynomial& b, double rel_tol) {
  if (b.is_zero()) throw Error(ErrorCode::DimensionMismatch, "division by zero polynomial");
  std::vector<Scalar> r = a.coefficients();
  const int db = b.degree();
  const double threshold = rel_tol * std::max(a.max_abs_coefficient(), b.max_abs_coefficient());
  const auto& bc = b.coefficients();
  while (static_cast<int>(r.size()) - 1 >= db) {
    const Scalar factor = r.back() / b.leading();
    const std::size_t shift = r.size() - 1 - static_cast<std::size_t>(db);
    for (int i = 0; i <= db; ++i) r[shift + static_cast<std::size_t>(i)] -= factor * bc[static_cast<std::size_t>(i)];
    r.pop_back();
    while (!r.empty() && std::abs(r.back()) <= threshold) r.pop_back();
  }
  return trimmed_below(Polynomial(std::move(r)), threshold);
}

Polynomial poly_gcd(const Polynomial& a, const Polynomial& b, double rel_tol) {
  auto normalized = [](const Polynomial& p) { return p * Scalar(1.0 / p.max_abs_coefficient()); };
  if (a.is_zero() && b.is_zero()) return {};
  if (a.is_zero()) return b * (Scalar(1.0) / b.leading());
  if (b.is_zero()) return a * (Scalar(1.0) / a.leading());
  Polynomial x = normalized(a);
  Polynomial y = normalized(b);
  if (x.degree() < y.degree()) std::swap(x, y);
  while (!y.is_zero()) {
    Polynomial r = poly_remainder(x, y, rel_tol);
    x = std::move(y);
    y = r.is_zero() ? r : normalized(r);
  }
  return x * (Scalar(1.0) / x.leading());
}

PolyMatrix::PolyMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {}

PolyMatrix::PolyMatrix(std::vector<std::vector<Polynomial>> entries)
    : rows_(entries.size()), cols_(entries.empty() ? 0 : entries.front().size()) {
  entries_.reserve(rows_ * cols_);
  for (auto& row : entries) {
    if (row.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "ragged polynomial matrix");
    for (auto& p : row) entries_.push_back(std::move(p));
  }
}

PolyMatrix PolyMatrix::from_constant(const Matrix& m) {
  PolyMatrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (std::size_t i = 0; i < out.rows_; ++i) {
    for (std::size_t j = 0; j < out.cols_; ++j) {
      out(i, j) = Polynomial::constant(m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
  }
  return out;
}

int PolyMatrix::degree() const {
  int d = -1;
  for (const auto& p : entries_) d = std::max(d, p.degree());
  return d;
}

Matrix PolyMatrix::evaluate(Scalar x) const {
  Matrix out(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (*this)(i, j)(x);
  }
  return out;
}

Matrix PolyMatrix::coefficient(int k) const {
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      const auto& c = (*this)(i, j).coefficients();
      if (k >= 0 && static_cast<std::size_t>(k) < c.size()) {
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = c[static_cast<std::size_t>(k)];
      }
    }
  }
  return out;
}

double PolyMatrix::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& p : entries_) m = std::max(m, p.max_abs_coefficient());
  return m;
}

PolyMatrix PolyMatrix::select_columns(const SensorSet& cols) const {
  PolyMatrix out(rows_, cols.size());
  for (std::size_t k = 0; k < cols.size(); ++k) {
    if (cols[k] < 1 || cols[k] > cols_) throw Error(ErrorCode::IndexOutOfRange, "column index");
    for (std::size_t i = 0; i < rows_; ++i) out(i, k) = (*this)(i, cols[k] - 1);
  }
  return out;
}

PolyMatrix PolyMatrix::select_rows(const std::vector<std::size_t>& rows) const {
  PolyMatrix out(rows.size(), cols_);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] < 1 || rows[k] > rows_) throw Error(ErrorCode::IndexOutOfRange, "row index");
    for (std::size_t j = 0; j < cols_; ++j) out(k, j) = (*this)(rows[k] - 1, j);
  }
  return out;
}

PolyMatrix PolyMatrix::left_multiply(const Matrix& m) const {
  if (static_cast<std::size_t>(m.cols()) != rows_) throw Error(ErrorCode::DimensionMismatch, "left factor shape");
  PolyMatrix out(static_cast<std::size_t>(m.rows()), cols_);
  for (std::size_t i = 0; i < out.rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      Polynomial acc;
      for (std::size_t k = 0; k < rows_; ++k) {
        acc = acc + (*this)(k, j) * m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
      }
      out(i, j) = acc;
    }
  }
  return out;
}

Polynomial determinant(const PolyMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::NotSquare, "determinant of non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return Polynomial::constant(1.0);
  if (n == 1) return m(0, 0);
  Polynomial det;
  std::vector<std::size_t> rest(n - 1);
  for (std::size_t j = 0; j < n; ++j) {
    if (m(0, j).is_zero()) continue;
    SensorSet cols;
    for (std::size_t c = 0; c < n; ++c) {
      if (c != j) cols.push_back(c + 1);
    }
    for (std::size_t r = 0; r + 1 < n; ++r) rest[r] = r + 2;
    const Polynomial minor = determinant(m.select_rows(rest).select_columns(cols));
    const Polynomial term = m(0, j) * minor;
    det = (j % 2 == 0) ? det + term : det - term;
  }
  return det;
}

std::vector<Polynomial> maximal_minors(const PolyMatrix& m) {
  const std::size_t p = m.rows();
  const std::size_t q = m.cols();
  if (p < q) throw Error(ErrorCode::WideMatrix, "matrix has fewer rows than columns");
  std::vector<Polynomial> out;
  SensorSet rows(q);
  for (std::size_t i = 0; i < q; ++i) rows[i] = i + 1;
  do {
    out.push_back(determinant(m.select_rows(rows)));
  } while (subsets::next_combination(rows, p));
  return out;
}

namespace {

std::vector<Polynomial> nonzero_minors(const PolyMatrix& m) {
  const double scale = m.max_abs_coefficient();
  const double threshold = kTrimTol * std::pow(scale, static_cast<double>(m.cols()));
  std::vector<Polynomial> out;
  for (const Polynomial& minor : maximal_minors(m)) {
    Polynomial t = trimmed_below(minor, threshold);
    if (!t.is_zero()) out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

bool is_left_unimodular(const PolyMatrix& m, const ToleranceConfig& tol) {
  if (m.rows() < m.cols()) throw Error(ErrorCode::WideMatrix, "matrix has fewer rows than columns");
  if (m.cols() == 0) return true;
  const std::vector<Polynomial> minors = nonzero_minors(m);
  if (minors.empty()) return false;
  const Polynomial& pivot = *std::min_element(
      minors.begin(), minors.end(), [](const Polynomial& a, const Polynomial& b) { return a.degree() < b.degree(); });
  if (pivot.degree() == 0) return true;
  // Multiple roots come back from the companion matrix only to about
  // sqrt(eps), so the rank test at a candidate uses a looser cutoff.
  // The reference magnitude bounds |M(lambda)| from the coefficients, so a
  // single column that vanishes at lambda is caught as well.
  const double cutoff = std::sqrt(tol.rank_tol);
  std::vector<double> coeff_norms;
  for (int k = 0; k <= m.degree(); ++k) coeff_norms.push_back(m.coefficient(k).norm());
  for (const Scalar& lambda : pivot.roots()) {
    double reference = 0.0;
    for (std::size_t k = 0; k < coeff_norms.size(); ++k) {
      reference += coeff_norms[k] * std::pow(std::abs(lambda), static_cast<double>(k));
    }
    const Eigen::VectorXd sv = linalg::singular_values(m.evaluate(lambda));
    if (sv(sv.size() - 1) <= cutoff * reference) return false;
  }
  return true;
}

bool is_left_unimodular_gcd(const PolyMatrix& m, const ToleranceConfig&) {
  if (m.rows() < m.cols()) throw Error(ErrorCode::WideMatrix, "matrix has fewer rows than columns");
  if (m.cols() == 0) return true;
  const std::vector<Polynomial> minors = nonzero_minors(m);
  if (minors.empty()) return false;
  Polynomial g = minors.front();
  for (std::size_t i = 1; i < minors.size() && g.degree() > 0; ++i) g = poly_gcd(g, minors[i], kGcdTol);
  return g.degree() == 0;
}

std::size_t security_index_from_R(const PolyMatrix& r, const ToleranceConfig& tol, subsets::Execution exec) {
  if (r.rows() != r.cols()) throw Error(ErrorCode::NotSquare, "kernel representation must be N x N");
  const std::size_t sensors = r.cols();
  if (sensors == 0) throw Error(ErrorCode::InvalidKernelRep, "empty kernel representation");
  const double threshold = kTrimTol * std::pow(r.max_abs_coefficient(), static_cast<double>(sensors));
  if (trimmed_below(determinant(r), threshold).is_zero()) {
    throw Error(ErrorCode::InvalidKernelRep, "R does not have full column rank");
  }
  auto degenerate = [&](const SensorSet& j) { return !is_left_unimodular(r.select_columns(j), tol); };
  for (std::size_t size = 1; size <= sensors; ++size) {
    if (subsets::find_first(sensors, size, degenerate, exec)) return size;
  }
  throw Error(ErrorCode::InvalidKernelRep, "R is unimodular: its behavior is {0}");
}

Trajectory apply_shift_polynomial(const PolyMatrix& r, const Trajectory& traj) {
  if (r.cols() != traj.sensors()) throw Error(ErrorCode::DimensionMismatch, "R columns must equal sensor count");
  const int d = std::max(r.degree(), 0);
  const std::size_t horizon = traj.horizon();
  if (horizon <= static_cast<std::size_t>(d)) {
    throw Error(ErrorCode::HorizonTooShort, "horizon must exceed the degree of R");
  }
  const Eigen::Index out_len = static_cast<Eigen::Index>(horizon) - d;
  Matrix s = Matrix::Zero(static_cast<Eigen::Index>(r.rows()), out_len);
  for (int k = 0; k <= d; ++k) {
    s += r.coefficient(k) * traj.samples().middleCols(k, out_len);
  }
  return Trajectory(std::move(s));
}

}  // namespace secidx
