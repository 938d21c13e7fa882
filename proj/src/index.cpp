#include "secidx/index.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "secidx/linalg.hpp"

namespace secidx {

namespace {

// Relative cutoff for merging eigenvalues into one cluster.
constexpr double kEigenClusterTol = 1e-8;

double sigma_max(const Matrix& m) {
  const Eigen::VectorXd sv = linalg::singular_values(m);
  return sv.size() == 0 ? 0.0 : sv(0);
}

Vector unit(Vector v) {
  const double norm = v.norm();
  if (norm > 0.0) v /= norm;
  return v;
}

Matrix select_rows(const Matrix& m, const SensorSet& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out.row(static_cast<Eigen::Index>(k)) = m.row(static_cast<Eigen::Index>(rows[k] - 1));
  }
  return out;
}

}  // namespace

const char* to_string(IndexMethod method) {
  switch (method) {
    case IndexMethod::SubsetKernel: return "subset-kernel";
    case IndexMethod::Spark: return "spark";
    case IndexMethod::Eigen: return "eigen";
    case IndexMethod::Oracle: return "oracle";
  }
  return "unknown";
}

EigenStructure eigen_structure(const SystemModel& sys, const ToleranceConfig& tol) {
  const Matrix& a = sys.A();
  const Eigen::Index n = a.rows();
  Eigen::ComplexEigenSolver<Matrix> solver(a, false);
  const Vector values = solver.eigenvalues();
  const double norm_a = sigma_max(a);
  const double merge = kEigenClusterTol * norm_a;

  // Greedy clustering in solver order; each cluster is represented by its mean.
  std::vector<std::vector<Scalar>> clusters;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    bool placed = false;
    for (auto& cluster : clusters) {
      Scalar center = 0.0;
      for (const Scalar& v : cluster) center += v;
      center /= static_cast<double>(cluster.size());
      if (std::abs(values(i) - center) <= merge) {
        cluster.push_back(values(i));
        placed = true;
        break;
      }
    }
    if (!placed) clusters.push_back({values(i)});
  }

  EigenStructure es;
  Eigen::Index total = 0;
  for (const auto& cluster : clusters) {
    Scalar center = 0.0;
    for (const Scalar& v : cluster) center += v;
    center /= static_cast<double>(cluster.size());
    Matrix shifted = a - center * Matrix::Identity(n, n);
    Matrix basis = linalg::kernel_basis(shifted, tol.rank_tol, std::max(norm_a, 1e-300));
    // Rounding can leave a computed eigenvalue slightly off the kernel cutoff;
    // the eigenvector for the smallest singular value is still the right one.
    if (basis.cols() == 0) {
      basis = linalg::smallest_right_singular_vector(shifted);
    }
    total += basis.cols();
    es.eigenvalues.push_back(center);
    es.eigenspaces.push_back(std::move(basis));
  }

  es.diagonalizable = false;
  if (total == n) {
    // Nearly parallel eigenspaces indicate a defective matrix whose multiple
    // eigenvalue was split by rounding.
    Matrix all(n, n);
    Eigen::Index col = 0;
    for (const Matrix& b : es.eigenspaces) {
      all.middleCols(col, b.cols()) = b;
      col += b.cols();
    }
    const Eigen::VectorXd sv = linalg::singular_values(all);
    es.diagonalizable = sv(sv.size() - 1) > std::sqrt(tol.rank_tol);
  }
  return es;
}

SecurityIndexReport security_index_subset(const CodingMatrix& cm, const ToleranceConfig& tol,
                                          subsets::Execution exec) {
  const std::size_t sensors = cm.sensors();
  const double scale = sigma_max(cm.G());
  auto silenceable = [&](const SensorSet& j) {
    return linalg::has_kernel(stack_subset(cm, j), tol.rank_tol, scale);
  };

  SecurityIndexReport report;
  report.method = IndexMethod::SubsetKernel;
  for (std::size_t size = sensors - 1; size >= 1; --size) {
    if (auto j = subsets::find_first(sensors, size, silenceable, exec)) {
      report.delta = sensors - size;
      report.witness_state = unit(linalg::smallest_right_singular_vector(stack_subset(cm, *j)));
      report.witness_support = subsets::complement(*j, sensors);
      return report;
    }
  }
  // No sensor can be silenced: every nonzero state excites all sensors.
  report.delta = sensors;
  Vector e = Vector::Zero(static_cast<Eigen::Index>(cm.states()));
  e(0) = 1.0;
  report.witness_state = e;
  report.witness_support = subsets::complement({}, sensors);
  return report;
}

namespace {

std::optional<SensorSet> spark_subset(const CheckMatrix& h, const ToleranceConfig& tol,
                                      subsets::Execution exec, std::size_t& size_out) {
  const std::size_t sensors = h.sensors();
  const double scale = sigma_max(h.H());
  auto dependent = [&](const SensorSet& j) {
    return linalg::has_kernel(h.columns(j), tol.rank_tol, scale);
  };
  for (std::size_t size = 1; size <= sensors; ++size) {
    if (auto j = subsets::find_first(sensors, size, dependent, exec)) {
      size_out = size;
      return j;
    }
  }
  return std::nullopt;
}

}  // namespace

std::size_t spark(const CheckMatrix& h, const ToleranceConfig& tol, subsets::Execution exec) {
  if (h.sensors() == 1) return 1;
  std::size_t size = 0;
  if (!spark_subset(h, tol, exec, size)) {
    // Unreachable for a genuine check matrix: all N blocks are always dependent.
    throw Error(ErrorCode::DimensionMismatch, "check matrix has independent block columns");
  }
  return size;
}

SecurityIndexReport security_index_spark(const CodingMatrix& cm, const CheckMatrix& h,
                                         const ToleranceConfig& tol, subsets::Execution exec) {
  SecurityIndexReport report;
  report.method = IndexMethod::Spark;
  const std::size_t sensors = cm.sensors();
  const std::size_t n = cm.states();
  if (sensors == 1) {
    report.delta = 1;
    Vector e = Vector::Zero(static_cast<Eigen::Index>(n));
    e(0) = 1.0;
    report.witness_state = e;
    report.witness_support = {1};
    return report;
  }
  std::size_t size = 0;
  const auto j = spark_subset(h, tol, exec, size);
  if (!j) throw Error(ErrorCode::DimensionMismatch, "check matrix has independent block columns");
  const Vector z = linalg::smallest_right_singular_vector(h.columns(*j));
  Vector window = Vector::Zero(static_cast<Eigen::Index>(n * sensors));
  for (std::size_t k = 0; k < j->size(); ++k) {
    window.segment(static_cast<Eigen::Index>(((*j)[k] - 1) * n), static_cast<Eigen::Index>(n)) =
        z.segment(static_cast<Eigen::Index>(k * n), static_cast<Eigen::Index>(n));
  }
  report.delta = size;
  report.witness_state = unit(linalg::least_squares(cm.G(), window));
  report.witness_support = *j;
  return report;
}

SecurityIndexReport security_index_eigen(const SystemModel& sys, const EigenStructure& es,
                                         const ToleranceConfig& tol, subsets::Execution exec) {
  if (!es.diagonalizable) throw Error(ErrorCode::NotDiagonalizable, "eigen method needs diagonalizable A");
  const Matrix& c = sys.C();
  const std::size_t sensors = sys.sensors();
  const double scale = sigma_max(c);

  SecurityIndexReport best;
  best.method = IndexMethod::Eigen;
  best.delta = sensors + 1;
  for (const Matrix& basis : es.eigenspaces) {
    std::size_t inner = sensors;
    Vector witness;
    SensorSet zero_set;
    if (basis.cols() == 1) {
      const Vector v = basis.col(0);
      const Vector cv = c * v;
      const double cutoff = linalg::zero_threshold(tol.rank_tol, c.rows(), c.cols(), scale);
      for (std::size_t i = 0; i < sensors; ++i) {
        if (std::abs(cv(static_cast<Eigen::Index>(i))) <= cutoff) zero_set.push_back(i + 1);
      }
      witness = v;
    } else {
      auto silenceable = [&](const SensorSet& k) {
        return linalg::has_kernel(select_rows(c, k) * basis, tol.rank_tol, scale);
      };
      // The empty zero-set always qualifies; observability rules out all N.
      for (std::size_t size = sensors - 1; size >= 1; --size) {
        if (auto k = subsets::find_first(sensors, size, silenceable, exec)) {
          zero_set = *k;
          break;
        }
      }
      witness = zero_set.empty()
                    ? Vector(basis.col(0))
                    : Vector(basis * linalg::smallest_right_singular_vector(select_rows(c, zero_set) * basis));
    }
    inner = sensors - zero_set.size();
    if (inner < best.delta) {
      best.delta = inner;
      best.witness_state = unit(witness);
      best.witness_support = subsets::complement(zero_set, sensors);
    }
  }
  return best;
}

SecurityIndexReport security_index(const SystemModel& sys, const ToleranceConfig& tol,
                                   const IndexOptions& options) {
  const CodingMatrix cm = build_coding_matrix(sys);
  SecurityIndexReport report = security_index_subset(cm, tol, options.exec);
  std::map<IndexMethod, std::size_t> values{{IndexMethod::SubsetKernel, report.delta}};

  const EigenStructure es = eigen_structure(sys, tol);
  if (es.diagonalizable) {
    values[IndexMethod::Eigen] = security_index_eigen(sys, es, tol, options.exec).delta;
  }
  if (sys.sensors() <= options.spark_sensor_budget) {
    values[IndexMethod::Spark] = spark(build_check_matrix(cm, tol), tol, options.exec);
  }

  for (const auto& [method, value] : values) {
    if (value != report.delta) {
      std::ostringstream msg;
      msg << "methods disagree:";
      for (const auto& [m, v] : values) msg << ' ' << to_string(m) << '=' << v;
      throw Error(ErrorCode::MethodDisagreement, msg.str());
    }
  }
  report.method_values = std::move(values);
  return report;
}

bool is_maximally_secure(const CodingMatrix& cm, const ToleranceConfig& tol) {
  const double scale = sigma_max(cm.G());
  for (std::size_t i = 1; i <= cm.sensors(); ++i) {
    if (linalg::rank(cm.block(i), tol.rank_tol, scale) < cm.states()) return false;
  }
  return true;
}

std::size_t oracle_security_index(const CodingMatrix& cm, const ToleranceConfig& tol) {
  const std::size_t sensors = cm.sensors();
  if (sensors > kOracleMaxSensors) {
    throw Error(ErrorCode::TooManySensors, "oracle enumerates 2^N subsets; N = " + std::to_string(sensors));
  }
  const double scale = sigma_max(cm.G());
  std::size_t largest = 0;
  const std::uint32_t limit = std::uint32_t{1} << sensors;
  for (std::uint32_t mask = 1; mask < limit; ++mask) {
    SensorSet k;
    for (std::size_t i = 0; i < sensors; ++i) {
      if (mask & (std::uint32_t{1} << i)) k.push_back(i + 1);
    }
    if (linalg::has_kernel(stack_subset(cm, k), tol.rank_tol, scale)) {
      largest = std::max<std::size_t>(largest, static_cast<std::size_t>(std::popcount(mask)));
    }
  }
  return sensors - largest;
}

}  // namespace secidx
