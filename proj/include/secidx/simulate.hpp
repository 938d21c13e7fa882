#pragma once

#include <cstdint>
#include <optional>

#include "secidx/model.hpp"

namespace secidx {

/// y(t) = C A^t x0 for t = 0..T-1, by iterating the state update.
Trajectory simulate(const SystemModel& sys, const Vector& x0, std::size_t horizon);

/// r = y + eta.
Trajectory inject(const Trajectory& y, const AttackSignal& eta);

struct AttackOptions {
  /// Entry scale.
  double magnitude = 1.0;
  /// When set, nonzero entries are confined to t < active_horizon.
  std::optional<std::size_t> active_horizon;
};

/// Attack with exactly `attacked` nonzero rows. Rows are chosen uniformly and
/// entries drawn from a normal distribution, both from a generator seeded by `seed`.
AttackSignal random_attack(std::size_t sensors, std::size_t horizon, std::size_t attacked, std::uint64_t seed,
                           const AttackOptions& options = {});

/// Attack confined to `rows`, with samples copied from `source` on those rows.
AttackSignal restrict_attack(const Trajectory& source, const SensorSet& rows);

}  // namespace secidx
