#pragma once

#include <cstdint>
#include <optional>

#include "secidx/coding.hpp"
#include "secidx/model.hpp"
#include "secidx/polymat.hpp"
#include "secidx/subsets.hpp"

namespace secidx {

struct DetectionReport {
  bool attacked = false;
  double max_syndrome_norm = 0.0;
  std::optional<std::size_t> first_flagged_window;
  /// detect_tol scaled to the received signal; attacked iff max_syndrome_norm exceeds it.
  double threshold = 0.0;
};

struct CorrectionResult {
  Vector x0_estimate;
  SensorSet attack_support;
  Trajectory corrected;
  double residual = 0.0;
  std::uint64_t search_size = 0;
};

/// Syndrome s(t) = H Y(t) over every length-n window of r.
DetectionReport detect_H(const SystemModel& sys, const Trajectory& r, const ToleranceConfig& tol = {});
DetectionReport detect_H(const CheckMatrix& h, const Trajectory& r, const ToleranceConfig& tol = {});

/// Syndrome s = R(sigma) r.
DetectionReport detect_R(const PolyMatrix& R, const Trajectory& r, const ToleranceConfig& tol = {});

/// Least-squares x(0) from the samples of the trusted sensors only.
Vector reconstruct_state(const SystemModel& sys, const Trajectory& r, const SensorSet& trusted,
                         const ToleranceConfig& tol = {});

/// Support-enumeration decoder. Tries attack supports of size 0, 1, ...,
/// ceil(delta/2) - 1 and returns the first size at which some support leaves
/// the remaining sensors consistent with a single initial state.
CorrectionResult correct(const SystemModel& sys, const Trajectory& r, const ToleranceConfig& tol = {},
                         subsets::Execution exec = subsets::default_execution());

/// As above with a precomputed security index.
CorrectionResult correct(const SystemModel& sys, const Trajectory& r, std::size_t delta,
                         const ToleranceConfig& tol = {}, subsets::Execution exec = subsets::default_execution());

}  // namespace secidx
