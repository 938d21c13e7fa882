#include "secidx/coding.hpp"

#include <string>

#include "secidx/linalg.hpp"

namespace secidx {

namespace {

Eigen::Index idx(std::size_t v) { return static_cast<Eigen::Index>(v); }

}  // namespace

CodingMatrix::CodingMatrix(Matrix g, std::size_t states, std::size_t sensors)
    : g_(std::move(g)), states_(states), sensors_(sensors) {
  if (g_.rows() != idx(states * sensors) || g_.cols() != idx(states)) {
    throw Error(ErrorCode::DimensionMismatch, "coding matrix must be nN x n");
  }
}

Matrix CodingMatrix::block(std::size_t sensor) const {
  if (sensor < 1 || sensor > sensors_) {
    throw Error(ErrorCode::IndexOutOfRange, "sensor " + std::to_string(sensor));
  }
  return g_.middleRows(idx((sensor - 1) * states_), idx(states_));
}

CheckMatrix::CheckMatrix(Matrix h, std::size_t states, std::size_t sensors)
    : h_(std::move(h)), states_(states), sensors_(sensors) {
  if (h_.cols() != idx(states * sensors)) {
    throw Error(ErrorCode::DimensionMismatch, "check matrix must have nN columns");
  }
}

Matrix CheckMatrix::block(std::size_t sensor) const {
  if (sensor < 1 || sensor > sensors_) {
    throw Error(ErrorCode::IndexOutOfRange, "sensor " + std::to_string(sensor));
  }
  return h_.middleCols(idx((sensor - 1) * states_), idx(states_));
}

Matrix CheckMatrix::columns(const SensorSet& sensors) const {
  validate_sensor_set(sensors, sensors_);
  Matrix out(h_.rows(), idx(sensors.size() * states_));
  for (std::size_t k = 0; k < sensors.size(); ++k) {
    out.middleCols(idx(k * states_), idx(states_)) =
        h_.middleCols(idx((sensors[k] - 1) * states_), idx(states_));
  }
  return out;
}

void validate_sensor_set(const SensorSet& sensors, std::size_t count) {
  if (sensors.empty()) throw Error(ErrorCode::EmptySubset, "sensor subset is empty");
  for (std::size_t k = 0; k < sensors.size(); ++k) {
    if (sensors[k] < 1 || sensors[k] > count) {
      throw Error(ErrorCode::IndexOutOfRange,
                  "sensor " + std::to_string(sensors[k]) + " not in 1.." + std::to_string(count));
    }
    if (k > 0 && sensors[k] <= sensors[k - 1]) {
      throw Error(ErrorCode::IndexOutOfRange, "sensor subset must be strictly ascending");
    }
  }
}

Matrix coding_stack(const Matrix& a, const Matrix& c) {
  const Eigen::Index n = a.rows();
  const Eigen::Index sensors = c.rows();
  Matrix g(n * sensors, n);
  for (Eigen::Index i = 0; i < sensors; ++i) {
    Eigen::RowVectorXcd row = c.row(i);
    for (Eigen::Index k = 0; k < n; ++k) {
      g.row(i * n + k) = row;
      row = row * a;
    }
  }
  return g;
}

CodingMatrix build_coding_matrix(const SystemModel& sys) {
  return CodingMatrix(coding_stack(sys.A(), sys.C()), sys.states(), sys.sensors());
}

Matrix stack_subset(const CodingMatrix& cm, const SensorSet& sensors) {
  validate_sensor_set(sensors, cm.sensors());
  const std::size_t n = cm.states();
  Matrix out(idx(sensors.size() * n), idx(n));
  for (std::size_t k = 0; k < sensors.size(); ++k) {
    out.middleRows(idx(k * n), idx(n)) = cm.G().middleRows(idx((sensors[k] - 1) * n), idx(n));
  }
  return out;
}

CheckMatrix build_check_matrix(const CodingMatrix& cm, const ToleranceConfig& tol) {
  const std::size_t n = cm.states();
  const std::size_t sensors = cm.sensors();
  if (sensors == 1) return CheckMatrix(Matrix(0, idx(n)), n, 1);
  Matrix h = linalg::left_null_rows(cm.G(), tol.rank_tol);
  if (h.rows() != idx(n * (sensors - 1))) {
    throw Error(ErrorCode::NotObservable, "coding matrix rank is not n");
  }
  return CheckMatrix(std::move(h), n, sensors);
}

Vector window_vector(const Trajectory& traj, std::size_t t, std::size_t n) {
  if (n == 0 || t + n > traj.horizon()) {
    throw Error(ErrorCode::WindowOutOfRange,
                "window [" + std::to_string(t) + ", " + std::to_string(t + n) + ") exceeds horizon " +
                    std::to_string(traj.horizon()));
  }
  const std::size_t sensors = traj.sensors();
  Vector y(idx(n * sensors));
  for (std::size_t i = 0; i < sensors; ++i) {
    y.segment(idx(i * n), idx(n)) = traj.samples().row(idx(i)).segment(idx(t), idx(n)).transpose();
  }
  return y;
}

}  // namespace secidx
