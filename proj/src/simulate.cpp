#include "secidx/simulate.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace secidx {

Trajectory simulate(const SystemModel& sys, const Vector& x0, std::size_t horizon) {
  if (static_cast<std::size_t>(x0.size()) != sys.states()) {
    throw Error(ErrorCode::DimensionMismatch, "initial state has wrong dimension");
  }
  if (horizon == 0) throw Error(ErrorCode::HorizonTooShort, "horizon must be at least 1");
  Matrix y(static_cast<Eigen::Index>(sys.sensors()), static_cast<Eigen::Index>(horizon));
  Vector x = x0;
  for (std::size_t t = 0; t < horizon; ++t) {
    y.col(static_cast<Eigen::Index>(t)) = sys.C() * x;
    x = sys.A() * x;
  }
  return Trajectory(std::move(y));
}

Trajectory inject(const Trajectory& y, const AttackSignal& eta) {
  if (y.sensors() != eta.samples().sensors() || y.horizon() != eta.samples().horizon()) {
    throw Error(ErrorCode::DimensionMismatch, "attack shape differs from trajectory");
  }
  return y + eta.samples();
}

AttackSignal random_attack(std::size_t sensors, std::size_t horizon, std::size_t attacked, std::uint64_t seed,
                           const AttackOptions& options) {
  if (attacked > sensors) {
    throw Error(ErrorCode::InvalidWeight,
                "attack weight " + std::to_string(attacked) + " exceeds sensor count " + std::to_string(sensors));
  }
  if (horizon == 0) throw Error(ErrorCode::HorizonTooShort, "horizon must be at least 1");
  if (attacked > 0 && !(options.magnitude > 0.0)) {
    throw Error(ErrorCode::InvalidWeight, "attack magnitude must be positive");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> rows(sensors);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  // Partial Fisher-Yates with our own index draws keeps the choice identical across standard libraries.
  for (std::size_t i = 0; i < attacked; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng() % (sensors - i));
    std::swap(rows[i], rows[j]);
  }
  rows.resize(attacked);
  std::sort(rows.begin(), rows.end());

  const std::size_t active = std::min(horizon, options.active_horizon.value_or(horizon));
  if (attacked > 0 && active == 0) throw Error(ErrorCode::HorizonTooShort, "attack window is empty");
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix eta = Matrix::Zero(static_cast<Eigen::Index>(sensors), static_cast<Eigen::Index>(horizon));
  for (std::size_t row : rows) {
    for (std::size_t t = 0; t < active; ++t) {
      double v = normal(rng);
      // A zero draw would shrink the support.
      while (v == 0.0) v = normal(rng);
      eta(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(t)) = options.magnitude * v;
    }
  }
  return AttackSignal(Trajectory(std::move(eta)));
}

AttackSignal restrict_attack(const Trajectory& source, const SensorSet& rows) {
  Matrix eta = Matrix::Zero(source.samples().rows(), source.samples().cols());
  for (std::size_t row : rows) {
    if (row < 1 || row > source.sensors()) throw Error(ErrorCode::IndexOutOfRange, "attack row");
    eta.row(static_cast<Eigen::Index>(row - 1)) = source.samples().row(static_cast<Eigen::Index>(row - 1));
  }
  return AttackSignal(Trajectory(std::move(eta)));
}

}  // namespace secidx
