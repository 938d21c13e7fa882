#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "secidx/guard.hpp"
#include "secidx/index.hpp"
#include "secidx/model.hpp"
#include "secidx/polymat.hpp"

// File formats:
//   system JSON      {"A": [[...]], "C": [[...]]}, entries numbers or [re, im]
//   trajectory CSV   header t,s1,...,sN; one row per time step; "re+imj" when imag != 0
//   polynomial JSON  p x q grid of ascending coefficient arrays (optionally under key "R")
namespace secidx::io {

using nlohmann::json;

std::string format_scalar(Scalar v);
Scalar parse_scalar(const std::string& text);

json scalar_to_json(Scalar v);
Scalar scalar_from_json(const json& j);
json vector_to_json(const Vector& v);
Matrix matrix_from_json(const json& j);

SystemModel system_from_json(const json& j, const ToleranceConfig& tol = {});
SystemModel load_system(const std::string& path, const ToleranceConfig& tol = {});
json system_to_json(const Matrix& a, const Matrix& c);

Trajectory read_trajectory_csv(std::istream& in);
Trajectory load_trajectory(const std::string& path);
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
void save_trajectory(const std::string& path, const Trajectory& traj);

PolyMatrix poly_matrix_from_json(const json& j);
PolyMatrix load_poly_matrix(const std::string& path);
json poly_matrix_to_json(const PolyMatrix& m);

/// Comma-separated scalars, e.g. "1,1" or "1+2j,0".
Vector parse_vector(const std::string& text);

json to_json(const DetectionReport& report);
json to_json(const CorrectionResult& result);
json to_json(const SecurityIndexReport& report, bool maximally_secure, std::size_t sensors);
json attack_sidecar(const AttackSignal& attack, std::uint64_t seed, double magnitude);

json load_json(const std::string& path);
void save_json(const std::string& path, const json& j);

}  // namespace secidx::io
