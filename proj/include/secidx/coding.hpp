#pragma once

#include <vector>

#include "secidx/model.hpp"

namespace secidx {

/// Stacked per-sensor observability blocks. Block i (0-based) is the n x n
/// matrix whose row k is C_i A^k.
class CodingMatrix {
 public:
  CodingMatrix(Matrix g, std::size_t states, std::size_t sensors);

  const Matrix& G() const noexcept { return g_; }
  std::size_t states() const noexcept { return states_; }
  std::size_t sensors() const noexcept { return sensors_; }
  /// Block for 1-based sensor index.
  Matrix block(std::size_t sensor) const;

 private:
  Matrix g_;
  std::size_t states_;
  std::size_t sensors_;
};

/// Full-rank left annihilator of G with N horizontally juxtaposed n-column blocks.
class CheckMatrix {
 public:
  CheckMatrix(Matrix h, std::size_t states, std::size_t sensors);

  const Matrix& H() const noexcept { return h_; }
  std::size_t states() const noexcept { return states_; }
  std::size_t sensors() const noexcept { return sensors_; }
  Matrix block(std::size_t sensor) const;
  /// Juxtaposition of the blocks in `sensors` (ascending).
  Matrix columns(const SensorSet& sensors) const;

 private:
  Matrix h_;
  std::size_t states_;
  std::size_t sensors_;
};

/// G for raw (A, C), without validation. Used by SystemModel's observability check.
Matrix coding_stack(const Matrix& a, const Matrix& c);

CodingMatrix build_coding_matrix(const SystemModel& sys);

/// |J| n x n stack of the blocks in J.
Matrix stack_subset(const CodingMatrix& cm, const SensorSet& sensors);

CheckMatrix build_check_matrix(const CodingMatrix& cm, const ToleranceConfig& tol = {});

/// Length-nN vector whose block i holds samples t..t+n-1 of sensor i. For an
/// attack-free trajectory it equals G x(t).
Vector window_vector(const Trajectory& traj, std::size_t t, std::size_t n);

void validate_sensor_set(const SensorSet& sensors, std::size_t count);

}  // namespace secidx
