#include "secidx/model.hpp"

#include <cmath>

#include "secidx/coding.hpp"
#include "secidx/linalg.hpp"

namespace secidx {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotObservable: return "NotObservable";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::EmptySubset: return "EmptySubset";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::WindowOutOfRange: return "WindowOutOfRange";
    case ErrorCode::MethodDisagreement: return "MethodDisagreement";
    case ErrorCode::NotDiagonalizable: return "NotDiagonalizable";
    case ErrorCode::TooManySensors: return "TooManySensors";
    case ErrorCode::WideMatrix: return "WideMatrix";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::InvalidKernelRep: return "InvalidKernelRep";
    case ErrorCode::HorizonTooShort: return "HorizonTooShort";
    case ErrorCode::InvalidWeight: return "InvalidWeight";
    case ErrorCode::NoConsistentSupport: return "NoConsistentSupport";
    case ErrorCode::AmbiguousCorrection: return "AmbiguousCorrection";
    case ErrorCode::InsufficientObservability: return "InsufficientObservability";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

namespace {

bool all_finite(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    }
  }
  return true;
}

}  // namespace

void ToleranceConfig::validate() const {
  if (!(rank_tol >= 0.0) || !(residual_tol >= 0.0) || !(detect_tol >= 0.0)) {
    throw Error(ErrorCode::ParseError, "tolerances must be nonnegative");
  }
}

SystemModel::SystemModel(Matrix a, Matrix c, const ToleranceConfig& tol)
    : a_(std::move(a)), c_(std::move(c)) {
  tol.validate();
  if (a_.rows() == 0 || a_.rows() != a_.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "A must be square and nonempty");
  }
  if (c_.rows() == 0 || c_.cols() != a_.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "C must have as many columns as A and at least one row");
  }
  if (!all_finite(a_) || !all_finite(c_)) {
    throw Error(ErrorCode::NonFinite, "system matrices contain NaN or Inf");
  }
  const Matrix g = coding_stack(a_, c_);
  if (linalg::rank(g, tol.rank_tol) < states()) {
    throw Error(ErrorCode::NotObservable, "coding matrix is column rank deficient");
  }
}

SystemModel make_system(const Matrix& a, const Matrix& c, const ToleranceConfig& tol) {
  return SystemModel(a, c, tol);
}

Trajectory::Trajectory(Matrix samples) : samples_(std::move(samples)) {
  if (samples_.rows() == 0 || samples_.cols() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "trajectory needs at least one sensor and one sample");
  }
  if (!all_finite(samples_)) throw Error(ErrorCode::NonFinite, "trajectory contains NaN or Inf");
}

Trajectory Trajectory::zeros(std::size_t sensors, std::size_t horizon) {
  return Trajectory(Matrix::Zero(static_cast<Eigen::Index>(sensors), static_cast<Eigen::Index>(horizon)));
}

double Trajectory::max_abs() const { return linalg::max_abs(samples_); }

Trajectory Trajectory::operator+(const Trajectory& other) const {
  if (other.sensors() != sensors() || other.horizon() != horizon()) {
    throw Error(ErrorCode::DimensionMismatch, "trajectory shapes differ");
  }
  return Trajectory(samples_ + other.samples_);
}

Trajectory Trajectory::operator-(const Trajectory& other) const {
  if (other.sensors() != sensors() || other.horizon() != horizon()) {
    throw Error(ErrorCode::DimensionMismatch, "trajectory shapes differ");
  }
  return Trajectory(samples_ - other.samples_);
}

SensorSet support(const Trajectory& traj, const ToleranceConfig& tol) {
  SensorSet out;
  const Matrix& s = traj.samples();
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    if (s.row(i).cwiseAbs().maxCoeff() > tol.detect_tol) out.push_back(static_cast<std::size_t>(i) + 1);
  }
  return out;
}

std::size_t weight(const Trajectory& traj, const ToleranceConfig& tol) {
  return support(traj, tol).size();
}

AttackSignal::AttackSignal(Trajectory samples) : samples_(std::move(samples)) {
  const Matrix& s = samples_.samples();
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    if (s.row(i).cwiseAbs().maxCoeff() > 0.0) support_.push_back(static_cast<std::size_t>(i) + 1);
  }
}

Matrix to_complex(const Eigen::MatrixXd& m) { return m.cast<Scalar>(); }

}  // namespace secidx
