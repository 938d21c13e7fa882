#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "secidx/coding.hpp"
#include "secidx/model.hpp"
#include "secidx/subsets.hpp"

namespace secidx {

enum class IndexMethod { SubsetKernel, Spark, Eigen, Oracle };

const char* to_string(IndexMethod method);

struct SecurityIndexReport {
  std::size_t delta = 0;
  IndexMethod method = IndexMethod::SubsetKernel;
  /// Unit-norm initial state whose trajectory has weight delta.
  std::optional<Vector> witness_state;
  SensorSet witness_support;
  /// Every method the dispatcher ran, with its value. Empty for single-method calls.
  std::map<IndexMethod, std::size_t> method_values;
};

struct EigenStructure {
  std::vector<Scalar> eigenvalues;
  /// Orthonormal basis (n x d_j) of each eigenspace.
  std::vector<Matrix> eigenspaces;
  bool diagonalizable = false;
};

/// Eigenvalues within 1e-8 * ||A|| of each other are merged before the
/// eigenspaces are extracted.
EigenStructure eigen_structure(const SystemModel& sys, const ToleranceConfig& tol = {});

SecurityIndexReport security_index_subset(const CodingMatrix& cm, const ToleranceConfig& tol = {},
                                          subsets::Execution exec = subsets::default_execution());

/// Smallest number of block columns of H with a nonzero kernel. Defined as 1 when N = 1.
std::size_t spark(const CheckMatrix& h, const ToleranceConfig& tol = {},
                  subsets::Execution exec = subsets::default_execution());

/// Spark with a witness: a kernel vector of H_J lifted to an initial state via G.
SecurityIndexReport security_index_spark(const CodingMatrix& cm, const CheckMatrix& h,
                                         const ToleranceConfig& tol = {},
                                         subsets::Execution exec = subsets::default_execution());

SecurityIndexReport security_index_eigen(const SystemModel& sys, const EigenStructure& es,
                                         const ToleranceConfig& tol = {},
                                         subsets::Execution exec = subsets::default_execution());

struct IndexOptions {
  /// The spark method runs only when N is at most this.
  std::size_t spark_sensor_budget = 16;
  subsets::Execution exec = subsets::default_execution();
};

/// Runs every applicable method and throws MethodDisagreement unless all agree.
SecurityIndexReport security_index(const SystemModel& sys, const ToleranceConfig& tol = {},
                                   const IndexOptions& options = {});

bool is_maximally_secure(const CodingMatrix& cm, const ToleranceConfig& tol = {});

/// Exhaustive ground truth over all 2^N sensor subsets, with no pruning.
std::size_t oracle_security_index(const CodingMatrix& cm, const ToleranceConfig& tol = {});

inline constexpr std::size_t kOracleMaxSensors = 20;

}  // namespace secidx
