#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace secidx {

using Scalar = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Sorted, duplicate-free set of 1-based sensor indices.
using SensorSet = std::vector<std::size_t>;

enum class ErrorCode {
  DimensionMismatch,
  NotObservable,
  NonFinite,
  EmptySubset,
  IndexOutOfRange,
  WindowOutOfRange,
  MethodDisagreement,
  NotDiagonalizable,
  TooManySensors,
  WideMatrix,
  NotSquare,
  InvalidKernelRep,
  HorizonTooShort,
  InvalidWeight,
  NoConsistentSupport,
  AmbiguousCorrection,
  InsufficientObservability,
  ParseError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct ToleranceConfig {
  /// Singular values at or below rank_tol * max(rows, cols) * sigma_max count as zero.
  double rank_tol = 1e-10;
  /// Least-squares consistency threshold, relative to the signal magnitude.
  double residual_tol = 1e-8;
  /// Zero-row threshold for support/weight and syndrome threshold for detection.
  double detect_tol = 1e-9;

  void validate() const;
};

/// Discrete-time autonomous system x(t+1) = A x(t), y(t) = C x(t).
/// Construction rejects unobservable pairs, so every instance is observable.
class SystemModel {
 public:
  SystemModel(Matrix a, Matrix c, const ToleranceConfig& tol = {});

  const Matrix& A() const noexcept { return a_; }
  const Matrix& C() const noexcept { return c_; }
  std::size_t states() const noexcept { return static_cast<std::size_t>(a_.rows()); }
  std::size_t sensors() const noexcept { return static_cast<std::size_t>(c_.rows()); }

 private:
  Matrix a_;
  Matrix c_;
};

SystemModel make_system(const Matrix& a, const Matrix& c, const ToleranceConfig& tol = {});

/// Finite window of a multi-sensor output record. Row i is sensor i+1, column t is time t.
class Trajectory {
 public:
  explicit Trajectory(Matrix samples);
  static Trajectory zeros(std::size_t sensors, std::size_t horizon);

  const Matrix& samples() const noexcept { return samples_; }
  std::size_t sensors() const noexcept { return static_cast<std::size_t>(samples_.rows()); }
  std::size_t horizon() const noexcept { return static_cast<std::size_t>(samples_.cols()); }
  Scalar operator()(std::size_t sensor, std::size_t t) const { return samples_(sensor, t); }

  /// Largest entry magnitude; 0 for the zero trajectory.
  double max_abs() const;

  Trajectory operator+(const Trajectory& other) const;
  Trajectory operator-(const Trajectory& other) const;

 private:
  Matrix samples_;
};

SensorSet support(const Trajectory& traj, const ToleranceConfig& tol = {});
std::size_t weight(const Trajectory& traj, const ToleranceConfig& tol = {});

/// Additive sensor attack. The support is derived from the samples (exact nonzero rows).
class AttackSignal {
 public:
  explicit AttackSignal(Trajectory samples);

  const Trajectory& samples() const noexcept { return samples_; }
  const SensorSet& support() const noexcept { return support_; }
  std::size_t weight() const noexcept { return support_.size(); }

 private:
  Trajectory samples_;
  SensorSet support_;
};

/// Embed a real matrix as complex.
Matrix to_complex(const Eigen::MatrixXd& m);

}  // namespace secidx
