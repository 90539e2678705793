#pragma once

#include <cstdint>
#include <fstream>
#include <string>

#include <json.hpp>

#include "sbridge/common.hpp"
#include "sbridge/convex_support.hpp"
#include "sbridge/discrete_measure.hpp"
#include "sbridge/linear_system.hpp"

namespace sbridge {

/// Raised for unreadable, malformed, or inconsistent scenario files; the
/// message carries the offending field path.
struct ScenarioError : Error {
  using Error::Error;
};

/// Fully validated problem statement: system, two supported densities,
/// discretization and solver settings.
struct Scenario {
  LinearSystem system;
  std::string system_kind;  // registry name, or "constant"
  ConvexSupport set0, set1;
  DensitySpec density0, density1;
  int count0 = 200, count1 = 200;
  std::uint64_t seed = 0;
  double tol = 1e-12;
  int max_pass = 2000;
  int separation_power = 2;

  /// The heat kernel and the system kernel coincide for pure diffusion.
  bool classical() const { return system_kind == "brownian"; }
};

namespace detail {

using json = nlohmann::json;

inline const json& need(const json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key))
    throw ScenarioError("scenario: missing field " + path + "." + key);
  return j.at(key);
}

inline double need_number(const json& j, const char* key, const std::string& path) {
  const json& v = need(j, key, path);
  if (!v.is_number()) throw ScenarioError("scenario: " + path + "." + key + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ScenarioError("scenario: " + path + "." + key + " must be finite");
  return x;
}

inline int need_int(const json& j, const char* key, const std::string& path) {
  const json& v = need(j, key, path);
  if (!v.is_number_integer())
    throw ScenarioError("scenario: " + path + "." + key + " must be an integer");
  return v.get<int>();
}

inline std::string need_string(const json& j, const char* key, const std::string& path) {
  const json& v = need(j, key, path);
  if (!v.is_string()) throw ScenarioError("scenario: " + path + "." + key + " must be a string");
  return v.get<std::string>();
}

inline Vector parse_vector(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty())
    throw ScenarioError("scenario: " + path + " must be a non-empty array of numbers");
  Vector out(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number())
      throw ScenarioError("scenario: " + path + "[" + std::to_string(i) + "] must be a number");
    out(static_cast<Eigen::Index>(i)) = v[i].get<double>();
  }
  if (!out.allFinite()) throw ScenarioError("scenario: " + path + " must be finite");
  return out;
}

inline Matrix parse_matrix(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty())
    throw ScenarioError("scenario: " + path + " must be a non-empty array of rows");
  const size_t cols = v[0].is_array() ? v[0].size() : 0;
  if (cols == 0) throw ScenarioError("scenario: " + path + " rows must be non-empty arrays");
  Matrix out(v.size(), cols);
  for (size_t r = 0; r < v.size(); ++r) {
    if (!v[r].is_array() || v[r].size() != cols)
      throw ScenarioError("scenario: " + path + " rows must all have " + std::to_string(cols) +
                          " entries");
    for (size_t c = 0; c < cols; ++c) {
      if (!v[r][c].is_number())
        throw ScenarioError("scenario: " + path + "[" + std::to_string(r) + "][" +
                            std::to_string(c) + "] must be a number");
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v[r][c].get<double>();
    }
  }
  if (!all_finite(out)) throw ScenarioError("scenario: " + path + " must be finite");
  return out;
}

inline ConvexSupport parse_support(const json& j, const std::string& path) {
  const std::string kind = need_string(j, "kind", path);
  try {
    if (kind == "ball") {
      const double r = need_number(j, "radius", path);
      if (!(r > 0.0)) throw ScenarioError("scenario: " + path + ".radius must be positive");
      return make_ball(parse_vector(need(j, "center", path), path + ".center"), r);
    }
    if (kind == "ellipsoid")
      return make_ellipsoid(parse_vector(need(j, "center", path), path + ".center"),
                            parse_matrix(need(j, "shape", path), path + ".shape"));
    if (kind == "polytope")
      return make_polytope(
          parse_matrix(need(j, "vertices", path), path + ".vertices").transpose());
    if (kind == "point_cloud")
      return make_point_cloud(
          parse_matrix(need(j, "points", path), path + ".points").transpose());
    if (kind == "point") return make_point(parse_vector(need(j, "at", path), path + ".at"));
  } catch (const ScenarioError&) {
    throw;
  } catch (const Error& e) {
    throw ScenarioError("scenario: " + path + ": " + e.what());
  }
  throw ScenarioError("scenario: " + path + ".kind must be one of ball, ellipsoid, polytope, "
                      "point_cloud, point");
}

inline DensitySpec parse_density(const json& j, const std::string& path) {
  const std::string kind = need_string(j, "kind", path);
  if (kind == "uniform") return uniform_density();
  if (kind == "gaussian") {
    try {
      return gaussian_density(parse_vector(need(j, "mean", path), path + ".mean"),
                              parse_matrix(need(j, "cov", path), path + ".cov"));
    } catch (const ScenarioError&) {
      throw;
    } catch (const Error& e) {
      throw ScenarioError("scenario: " + path + ": " + e.what());
    }
  }
  throw ScenarioError("scenario: " + path + ".kind must be uniform or gaussian");
}

inline std::pair<LinearSystem, std::string> parse_system(const json& j, const std::string& path) {
  const double eps = need_number(j, "epsilon", path);
  try {
    if (j.contains("name")) {
      const std::string name = need_string(j, "name", path);
      const int dim = j.contains("dim") ? need_int(j, "dim", path) : 2;
      return {system_from_registry(name, eps, dim), name};
    }
    if (j.contains("A") || j.contains("B")) {
      const Matrix a = parse_matrix(need(j, "A", path), path + ".A");
      const Matrix b = parse_matrix(need(j, "B", path), path + ".B");
      return {make_constant_system(a, b, eps), "constant"};
    }
  } catch (const ScenarioError&) {
    throw;
  } catch (const Error& e) {
    throw ScenarioError("scenario: " + path + ": " + e.what());
  }
  throw ScenarioError("scenario: " + path + " needs either a registry name or matrices A and B");
}

}  // namespace detail

/// Parses and fully validates a scenario file. Nothing partial comes back:
/// any inconsistency throws a ScenarioError naming the field.
inline Scenario parse_scenario(const std::string& file_path) {
  std::ifstream in(file_path);
  if (!in) throw ScenarioError("scenario: cannot read " + file_path);
  detail::json j;
  try {
    in >> j;
  } catch (const detail::json::exception& e) {
    throw ScenarioError("scenario: " + file_path + " is not valid JSON: " + e.what());
  }

  Scenario s;
  std::tie(s.system, s.system_kind) = detail::parse_system(detail::need(j, "system", ""), "system");
  s.set0 = detail::parse_support(detail::need(j, "support0", ""), "support0");
  s.set1 = detail::parse_support(detail::need(j, "support1", ""), "support1");
  s.density0 = detail::parse_density(detail::need(j, "density0", ""), "density0");
  s.density1 = detail::parse_density(detail::need(j, "density1", ""), "density1");

  if (j.contains("discretization")) {
    const auto& d = j.at("discretization");
    s.count0 = detail::need_int(d, "count0", "discretization");
    s.count1 = detail::need_int(d, "count1", "discretization");
    const int seed = detail::need_int(d, "seed", "discretization");
    if (seed < 0) throw ScenarioError("scenario: discretization.seed must be nonnegative");
    s.seed = static_cast<std::uint64_t>(seed);
    if (s.count0 < 1 || s.count1 < 1)
      throw ScenarioError("scenario: discretization counts must be >= 1");
  }
  if (j.contains("solver")) {
    const auto& v = j.at("solver");
    s.tol = detail::need_number(v, "tol", "solver");
    s.max_pass = detail::need_int(v, "max_pass", "solver");
    if (!(s.tol > 0.0)) throw ScenarioError("scenario: solver.tol must be positive");
    if (s.max_pass < 1) throw ScenarioError("scenario: solver.max_pass must be >= 1");
  }
  if (j.contains("options")) {
    const auto& o = j.at("options");
    if (o.contains("separation_power")) {
      s.separation_power = detail::need_int(o, "separation_power", "options");
      if (s.separation_power != 1 && s.separation_power != 2)
        throw ScenarioError("scenario: options.separation_power must be 1 or 2");
    }
  }

  if (s.set0.dim != s.system.n)
    throw ScenarioError("scenario: support0 dimension " + std::to_string(s.set0.dim) +
                        " does not match the system state dimension " +
                        std::to_string(s.system.n));
  if (s.set1.dim != s.system.n)
    throw ScenarioError("scenario: support1 dimension " + std::to_string(s.set1.dim) +
                        " does not match the system state dimension " +
                        std::to_string(s.system.n));
  if (s.density0.kind == "gaussian" && s.density0.mean.size() != s.set0.dim)
    throw ScenarioError("scenario: density0.mean dimension does not match support0");
  if (s.density1.kind == "gaussian" && s.density1.mean.size() != s.set1.dim)
    throw ScenarioError("scenario: density1.mean dimension does not match support1");
  return s;
}

/// Serialized form that parses back to an equivalent scenario.
inline nlohmann::ordered_json scenario_to_json(const Scenario& s) {
  using oj = nlohmann::ordered_json;
  const auto vec = [](const Vector& v) {
    oj a = oj::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
  };
  const auto mat = [&](const Matrix& m) {
    oj a = oj::array();
    for (int r = 0; r < m.rows(); ++r) {
      oj row = oj::array();
      for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
      a.push_back(row);
    }
    return a;
  };
  const auto support = [&](const ConvexSupport& set) {
    oj o;
    if (const auto* b = std::get_if<Ball>(&set.body)) {
      o["kind"] = "ball";
      o["center"] = vec(b->c);
      o["radius"] = b->r;
    } else if (const auto* e = std::get_if<Ellipsoid>(&set.body)) {
      o["kind"] = "ellipsoid";
      o["center"] = vec(e->c);
      o["shape"] = mat(e->S);
    } else if (const auto* p = std::get_if<Polytope>(&set.body)) {
      o["kind"] = "polytope";
      o["vertices"] = mat(p->V.transpose());
    } else {
      const auto* c = std::get_if<PointCloud>(&set.body);
      o["kind"] = "point_cloud";
      o["points"] = mat(c->P.transpose());
    }
    return o;
  };
  const auto density = [&](const DensitySpec& d) {
    oj o;
    o["kind"] = d.kind;
    if (d.kind == "gaussian") {
      o["mean"] = vec(d.mean);
      o["cov"] = mat(d.cov);
    }
    return o;
  };

  oj j;
  if (s.system_kind == "constant") {
    j["system"]["A"] = mat(s.system.A(0.0));
    j["system"]["B"] = mat(s.system.B(0.0));
  } else {
    j["system"]["name"] = s.system_kind;
    if (s.system_kind == "brownian") j["system"]["dim"] = s.system.n;
  }
  j["system"]["epsilon"] = s.system.epsilon;
  j["support0"] = support(s.set0);
  j["support1"] = support(s.set1);
  j["density0"] = density(s.density0);
  j["density1"] = density(s.density1);
  j["discretization"] = {{"count0", s.count0},
                         {"count1", s.count1},
                         {"seed", static_cast<std::int64_t>(s.seed)}};
  j["solver"] = {{"tol", s.tol}, {"max_pass", s.max_pass}};
  j["options"] = {{"separation_power", s.separation_power}};
  return j;
}

}  // namespace sbridge
