#include "secidx/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace secidx::io {

namespace {

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::ParseError, "not a number: '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string strip(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\n')) s.pop_back();
  while (!s.empty() && s.front() == ' ') s.erase(s.begin());
  return s;
}

}  // namespace

std::string format_scalar(Scalar v) {
  if (v.imag() == 0.0) return shortest(v.real());
  std::string im = shortest(v.imag());
  if (im.front() != '-') im.insert(im.begin(), '+');
  return shortest(v.real()) + im + "j";
}

Scalar parse_scalar(const std::string& raw) {
  const std::string text = strip(raw);
  if (text.empty()) throw Error(ErrorCode::ParseError, "empty scalar");
  if (text.back() != 'j') return {parse_double(text), 0.0};
  // Split at the last sign that is not a leading sign or an exponent sign.
  std::size_t split_at = std::string::npos;
  for (std::size_t i = text.size() - 1; i-- > 1;) {
    if ((text[i] == '+' || text[i] == '-') && text[i - 1] != 'e' && text[i - 1] != 'E') {
      split_at = i;
      break;
    }
  }
  const std::string_view body(text.data(), text.size() - 1);
  if (split_at == std::string::npos) return {0.0, parse_double(body)};
  return {parse_double(body.substr(0, split_at)), parse_double(body.substr(split_at))};
}

json scalar_to_json(Scalar v) {
  if (v.imag() == 0.0) return v.real();
  return json::array({v.real(), v.imag()});
}

Scalar scalar_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  if (j.is_string()) return parse_scalar(j.get<std::string>());
  throw Error(ErrorCode::ParseError, "scalar must be a number, [re, im] or \"re+imj\"");
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(scalar_to_json(v(i)));
  return out;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw Error(ErrorCode::ParseError, "matrix must be a nonempty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) throw Error(ErrorCode::ParseError, "matrix rows must be nonempty arrays");
  const std::size_t cols = j[0].size();
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw Error(ErrorCode::ParseError, "ragged matrix");
    for (std::size_t k = 0; k < cols; ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = scalar_from_json(j[i][k]);
    }
  }
  return m;
}

SystemModel system_from_json(const json& j, const ToleranceConfig& tol) {
  if (!j.is_object() || !j.contains("A") || !j.contains("C")) {
    throw Error(ErrorCode::ParseError, "system file needs keys \"A\" and \"C\"");
  }
  return make_system(matrix_from_json(j.at("A")), matrix_from_json(j.at("C")), tol);
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

void save_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
  out << j.dump(2) << '\n';
}

SystemModel load_system(const std::string& path, const ToleranceConfig& tol) {
  return system_from_json(load_json(path), tol);
}

json system_to_json(const Matrix& a, const Matrix& c) {
  auto rows = [](const Matrix& m) {
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(vector_to_json(m.row(i).transpose()));
    return out;
  };
  return json{{"A", rows(a)}, {"C", rows(c)}};
}

Trajectory read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "trajectory CSV is empty");
  const std::vector<std::string> header = split(strip(line), ',');
  if (header.size() < 2 || strip(header[0]) != "t") {
    throw Error(ErrorCode::ParseError, "trajectory header must be t,s1,...,sN");
  }
  for (std::size_t i = 1; i < header.size(); ++i) {
    if (strip(header[i]) != "s" + std::to_string(i)) {
      throw Error(ErrorCode::ParseError, "unexpected header column '" + header[i] + "'");
    }
  }
  const std::size_t sensors = header.size() - 1;
  std::vector<std::vector<Scalar>> columns;
  while (std::getline(in, line)) {
    line = strip(line);
    if (line.empty()) continue;
    const std::vector<std::string> cells = split(line, ',');
    if (cells.size() != sensors + 1) throw Error(ErrorCode::ParseError, "row has wrong number of cells: " + line);
    if (parse_double(cells[0]) != static_cast<double>(columns.size())) {
      throw Error(ErrorCode::ParseError, "time column must count 0,1,2,...");
    }
    std::vector<Scalar> col(sensors);
    for (std::size_t i = 0; i < sensors; ++i) col[i] = parse_scalar(cells[i + 1]);
    columns.push_back(std::move(col));
  }
  if (columns.empty()) throw Error(ErrorCode::ParseError, "trajectory has no samples");
  Matrix m(static_cast<Eigen::Index>(sensors), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t t = 0; t < columns.size(); ++t) {
    for (std::size_t i = 0; i < sensors; ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) = columns[t][i];
  }
  try {
    return Trajectory(std::move(m));
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

Trajectory load_trajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  return read_trajectory_csv(in);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << 't';
  for (std::size_t i = 1; i <= traj.sensors(); ++i) out << ",s" << i;
  out << '\n';
  for (std::size_t t = 0; t < traj.horizon(); ++t) {
    out << t;
    for (std::size_t i = 0; i < traj.sensors(); ++i) out << ',' << format_scalar(traj(i, t));
    out << '\n';
  }
}

void save_trajectory(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
  write_trajectory_csv(out, traj);
}

PolyMatrix poly_matrix_from_json(const json& j) {
  const json& grid = (j.is_object() && j.contains("R")) ? j.at("R") : j;
  if (!grid.is_array() || grid.empty()) throw Error(ErrorCode::ParseError, "polynomial matrix must be a grid");
  std::vector<std::vector<Polynomial>> entries;
  for (const json& row : grid) {
    if (!row.is_array() || row.size() != grid[0].size() || row.empty()) {
      throw Error(ErrorCode::ParseError, "ragged polynomial matrix");
    }
    std::vector<Polynomial> out_row;
    for (const json& cell : row) {
      if (!cell.is_array()) throw Error(ErrorCode::ParseError, "entry must be a coefficient array");
      std::vector<Scalar> coeffs;
      for (const json& c : cell) coeffs.push_back(scalar_from_json(c));
      out_row.emplace_back(std::move(coeffs));
    }
    entries.push_back(std::move(out_row));
  }
  return PolyMatrix(std::move(entries));
}

PolyMatrix load_poly_matrix(const std::string& path) { return poly_matrix_from_json(load_json(path)); }

json poly_matrix_to_json(const PolyMatrix& m) {
  json grid = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) {
      json cell = json::array();
      for (const Scalar& c : m(i, k).coefficients()) cell.push_back(scalar_to_json(c));
      row.push_back(std::move(cell));
    }
    grid.push_back(std::move(row));
  }
  return grid;
}

Vector parse_vector(const std::string& text) {
  const std::vector<std::string> cells = split(text, ',');
  if (cells.empty()) throw Error(ErrorCode::ParseError, "empty vector");
  Vector v(static_cast<Eigen::Index>(cells.size()));
  for (std::size_t i = 0; i < cells.size(); ++i) v(static_cast<Eigen::Index>(i)) = parse_scalar(cells[i]);
  return v;
}

json to_json(const DetectionReport& report) {
  json j{{"attacked", report.attacked}, {"max_syndrome_norm", report.max_syndrome_norm}};
  j["first_flagged_window"] = report.first_flagged_window ? json(*report.first_flagged_window) : json(nullptr);
  return j;
}

json to_json(const CorrectionResult& result) {
  return json{{"x0", vector_to_json(result.x0_estimate)},
              {"support", result.attack_support},
              {"residual", result.residual},
              {"search_size", result.search_size}};
}

json to_json(const SecurityIndexReport& report, bool maximally_secure, std::size_t sensors) {
  json methods = json::object();
  for (const auto& [method, value] : report.method_values) methods[to_string(method)] = value;
  if (methods.empty()) methods[to_string(report.method)] = report.delta;
  json j{{"delta", report.delta},
         {"sensors", sensors},
         {"maximally_secure", maximally_secure},
         {"methods", methods},
         {"witness_support", report.witness_support}};
  j["witness_state"] = report.witness_state ? vector_to_json(*report.witness_state) : json(nullptr);
  return j;
}

json attack_sidecar(const AttackSignal& attack, std::uint64_t seed, double magnitude) {
  return json{{"support", attack.support()},
              {"weight", attack.weight()},
              {"seed", seed},
              {"magnitude", magnitude},
              {"sensors", attack.samples().sensors()},
              {"horizon", attack.samples().horizon()}};
}

}  // namespace secidx::io
