#include "secidx/guard.hpp"

#include <algorithm>
#include <limits>

#include "secidx/index.hpp"
#include "secidx/linalg.hpp"
#include "secidx/simulate.hpp"

namespace secidx {

namespace {

// Below this many windows the OpenMP fork costs more than the products.
constexpr std::int64_t kParallelWindows = 256;

Eigen::Index idx(std::size_t v) { return static_cast<Eigen::Index>(v); }

// Per-sensor rows C_i A^t, t = 0..T-1, for least-squares state recovery.
class ObservationStack {
 public:
  ObservationStack(const SystemModel& sys, std::size_t horizon)
      : n_(sys.states()), horizon_(horizon), rows_(idx(sys.sensors() * horizon), idx(sys.states())) {
    for (std::size_t i = 0; i < sys.sensors(); ++i) {
      Eigen::RowVectorXcd row = sys.C().row(idx(i));
      for (std::size_t t = 0; t < horizon; ++t) {
        rows_.row(idx(i * horizon + t)) = row;
        row = row * sys.A();
      }
    }
  }

  Matrix rows_for(const SensorSet& sensors) const {
    Matrix out(idx(sensors.size() * horizon_), idx(n_));
    for (std::size_t k = 0; k < sensors.size(); ++k) {
      out.middleRows(idx(k * horizon_), idx(horizon_)) = rows_.middleRows(idx((sensors[k] - 1) * horizon_), idx(horizon_));
    }
    return out;
  }

 private:
  std::size_t n_;
  std::size_t horizon_;
  Matrix rows_;
};

Vector samples_for(const Trajectory& r, const SensorSet& sensors) {
  const std::size_t horizon = r.horizon();
  Vector out(idx(sensors.size() * horizon));
  for (std::size_t k = 0; k < sensors.size(); ++k) {
    out.segment(idx(k * horizon), idx(horizon)) = r.samples().row(idx(sensors[k] - 1)).transpose();
  }
  return out;
}

struct Fit {
  bool identifiable = false;
  Vector x0;
  double residual = std::numeric_limits<double>::infinity();
};

Fit fit_trusted(const ObservationStack& obs, const Trajectory& r, const SensorSet& trusted, std::size_t n,
                const ToleranceConfig& tol) {
  Fit fit;
  if (trusted.empty()) return fit;
  const Matrix m = obs.rows_for(trusted);
  if (linalg::rank(m, tol.rank_tol) < n) return fit;
  const Vector b = samples_for(r, trusted);
  fit.identifiable = true;
  fit.x0 = linalg::least_squares(m, b);
  fit.residual = linalg::max_abs(m * fit.x0 - b);
  return fit;
}

DetectionReport summarize(const std::vector<double>& norms, double threshold) {
  DetectionReport report;
  report.threshold = threshold;
  for (std::size_t t = 0; t < norms.size(); ++t) {
    report.max_syndrome_norm = std::max(report.max_syndrome_norm, norms[t]);
    if (!report.first_flagged_window && norms[t] > threshold) report.first_flagged_window = t;
  }
  report.attacked = report.max_syndrome_norm > threshold;
  return report;
}

}  // namespace

DetectionReport detect_H(const CheckMatrix& h, const Trajectory& r, const ToleranceConfig& tol) {
  const std::size_t n = h.states();
  if (r.sensors() != h.sensors()) throw Error(ErrorCode::DimensionMismatch, "trajectory sensor count");
  if (r.horizon() < n) throw Error(ErrorCode::HorizonTooShort, "detection needs at least n samples");
  const auto windows = static_cast<std::int64_t>(r.horizon() - n + 1);
  std::vector<double> norms(static_cast<std::size_t>(windows), 0.0);
  if (h.H().rows() > 0) {
#pragma omp parallel for schedule(static) if (windows >= kParallelWindows)
    for (std::int64_t t = 0; t < windows; ++t) {
      norms[static_cast<std::size_t>(t)] = (h.H() * window_vector(r, static_cast<std::size_t>(t), n)).norm();
    }
  }
  return summarize(norms, tol.detect_tol * r.max_abs());
}

DetectionReport detect_H(const SystemModel& sys, const Trajectory& r, const ToleranceConfig& tol) {
  if (r.horizon() < sys.states()) throw Error(ErrorCode::HorizonTooShort, "detection needs at least n samples");
  return detect_H(build_check_matrix(build_coding_matrix(sys), tol), r, tol);
}

DetectionReport detect_R(const PolyMatrix& R, const Trajectory& r, const ToleranceConfig& tol) {
  const Trajectory s = apply_shift_polynomial(R, r);
  std::vector<double> norms(s.horizon());
  for (std::size_t t = 0; t < s.horizon(); ++t) {
    norms[t] = s.samples().col(idx(t)).cwiseAbs().maxCoeff();
  }
  return summarize(norms, tol.detect_tol * r.max_abs() * R.max_abs_coefficient());
}

Vector reconstruct_state(const SystemModel& sys, const Trajectory& r, const SensorSet& trusted,
                         const ToleranceConfig& tol) {
  if (r.sensors() != sys.sensors()) throw Error(ErrorCode::DimensionMismatch, "trajectory sensor count");
  if (trusted.empty()) throw Error(ErrorCode::InsufficientObservability, "no trusted sensors");
  validate_sensor_set(trusted, sys.sensors());
  const ObservationStack obs(sys, r.horizon());
  const Fit fit = fit_trusted(obs, r, trusted, sys.states(), tol);
  if (!fit.identifiable) {
    throw Error(ErrorCode::InsufficientObservability, "trusted sensors do not determine the state");
  }
  return fit.x0;
}

CorrectionResult correct(const SystemModel& sys, const Trajectory& r, std::size_t delta, const ToleranceConfig& tol,
                         subsets::Execution exec) {
  const std::size_t n = sys.states();
  const std::size_t sensors = sys.sensors();
  if (r.sensors() != sensors) throw Error(ErrorCode::DimensionMismatch, "trajectory sensor count");
  if (r.horizon() < n) throw Error(ErrorCode::HorizonTooShort, "correction needs at least n samples");

  const ObservationStack obs(sys, r.horizon());
  const double scale = r.max_abs();
  const double accept = tol.residual_tol * scale;
  auto consistent = [&](const SensorSet& attacked) {
    const Fit fit = fit_trusted(obs, r, subsets::complement(attacked, sensors), n, tol);
    return fit.identifiable && fit.residual <= accept;
  };

  // Strict bound |support| < delta / 2.
  const std::size_t max_weight = delta == 0 ? 0 : (delta - 1) / 2;
  std::uint64_t tested = 0;
  for (std::size_t q = 0; q <= max_weight && q < sensors; ++q) {
    const std::vector<SensorSet> accepted = subsets::find_all(sensors, q, consistent, exec);
    tested += subsets::binomial(sensors, q);
    if (accepted.empty()) continue;

    const Fit best = fit_trusted(obs, r, subsets::complement(accepted.front(), sensors), n, tol);
    Trajectory corrected = simulate(sys, best.x0, r.horizon());
    for (std::size_t k = 1; k < accepted.size(); ++k) {
      const Fit other = fit_trusted(obs, r, subsets::complement(accepted[k], sensors), n, tol);
      const double gap = (simulate(sys, other.x0, r.horizon()) - corrected).max_abs();
      if (gap > accept) {
        throw Error(ErrorCode::AmbiguousCorrection,
                    "supports of size " + std::to_string(q) + " yield different corrections");
      }
    }
    return CorrectionResult{best.x0, accepted.front(), std::move(corrected), best.residual, tested};
  }
  throw Error(ErrorCode::NoConsistentSupport,
              "no attack support of size <= " + std::to_string(max_weight) + " explains the signal");
}

CorrectionResult correct(const SystemModel& sys, const Trajectory& r, const ToleranceConfig& tol,
                         subsets::Execution exec) {
  const std::size_t delta = security_index_subset(build_coding_matrix(sys), tol, exec).delta;
  return correct(sys, r, delta, tol, exec);
}

}  // namespace secidx
