#include "cbary/json_io.hpp"

#include <charconv>
#include <cstdio>

namespace cbary::io {

namespace {

std::string at(const std::string& where, std::size_t i) { return where + "[" + std::to_string(i) + "]"; }

const json& require_array(const json& v, const std::string& where) {
  if (!v.is_array()) throw InputError(where + ": expected an array");
  return v;
}

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw InputError(where + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw InputError(where + "." + key + ": missing field");
  return *it;
}

Eigen::MatrixXd parse_real_matrix(const json& v, Index rows, Index cols, const std::string& where) {
  require_array(v, where);
  if (static_cast<Index>(v.size()) != rows) {
    throw InputError(where + ": expected " + std::to_string(rows) + " rows");
  }
  Eigen::MatrixXd m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const auto& row = require_array(v[static_cast<std::size_t>(i)], at(where, static_cast<std::size_t>(i)));
    if (static_cast<Index>(row.size()) != cols) {
      throw InputError(at(where, static_cast<std::size_t>(i)) + ": expected " + std::to_string(cols) + " entries");
    }
    for (Index j = 0; j < cols; ++j) {
      m(i, j) = parse_number(row[static_cast<std::size_t>(j)],
                             at(at(where, static_cast<std::size_t>(i)), static_cast<std::size_t>(j)));
    }
  }
  return m;
}

cdouble parse_complex(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) throw InputError(where + ": expected a [re, im] pair");
  return {parse_number(v[0], where + "[0]"), parse_number(v[1], where + "[1]")};
}

Eigen::MatrixXcd parse_complex_matrix(const json& v, Index n, const std::string& where) {
  require_array(v, where);
  if (static_cast<Index>(v.size()) != n) throw InputError(where + ": expected " + std::to_string(n) + " rows");
  Eigen::MatrixXcd m(n, n);
  for (Index i = 0; i < n; ++i) {
    const auto& row = require_array(v[static_cast<std::size_t>(i)], at(where, static_cast<std::size_t>(i)));
    if (static_cast<Index>(row.size()) != n) {
      throw InputError(at(where, static_cast<std::size_t>(i)) + ": expected " + std::to_string(n) + " entries");
    }
    for (Index j = 0; j < n; ++j) {
      m(i, j) = parse_complex(row[static_cast<std::size_t>(j)],
                              at(at(where, static_cast<std::size_t>(i)), static_cast<std::size_t>(j)));
    }
  }
  return m;
}

Eigen::VectorXd parse_ambient_point(const json& v, Model model, Index dim, const std::string& where) {
  if (model == Model::poincare) return parse_real_point(v, dim, where).coords();
  return to_real(parse_complex_point(v, dim, where).coords());
}

}  // namespace

double parse_number(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (!v.is_string()) throw InputError(where + ": expected a number or decimal string");
  const std::string s = v.get<std::string>();
  double out = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || s.empty()) {
    throw InputError(where + ": '" + s + "' is not a decimal number");
  }
  return out;
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

RealPoint parse_real_point(const json& v, Index n, const std::string& where) {
  require_array(v, where);
  if (static_cast<Index>(v.size()) != n) {
    throw InputError(where + ": expected " + std::to_string(n) + " coordinates, got " + std::to_string(v.size()));
  }
  Eigen::VectorXd x(n);
  for (Index i = 0; i < n; ++i) x[i] = parse_number(v[static_cast<std::size_t>(i)], at(where, static_cast<std::size_t>(i)));
  try {
    return RealPoint(std::move(x));
  } catch (const DomainError& e) {
    throw DomainError(where + ": " + e.what());
  }
}

ComplexPoint parse_complex_point(const json& v, Index m, const std::string& where) {
  require_array(v, where);
  if (static_cast<Index>(v.size()) != m) {
    throw InputError(where + ": expected " + std::to_string(m) + " complex coordinates, got " +
                     std::to_string(v.size()));
  }
  Eigen::VectorXcd z(m);
  for (Index i = 0; i < m; ++i) z[i] = parse_complex(v[static_cast<std::size_t>(i)], at(where, static_cast<std::size_t>(i)));
  try {
    return ComplexPoint(std::move(z));
  } catch (const DomainError& e) {
    throw DomainError(where + ": " + e.what());
  }
}

json emit_point(const RealPoint& p) {
  json out = json::array();
  for (Index i = 0; i < p.dim(); ++i) out.push_back(format_number(p.coords()[i]));
  return out;
}

json emit_point(const ComplexPoint& p) {
  json out = json::array();
  for (Index i = 0; i < p.dim(); ++i) {
    out.push_back(json::array({format_number(p.coords()[i].real()), format_number(p.coords()[i].imag())}));
  }
  return out;
}

json emit_ambient_point(Model model, const Eigen::VectorXd& x) {
  if (model == Model::poincare) return emit_point(RealPoint::trusted(x));
  return emit_point(ComplexPoint::trusted(to_complex(x)));
}

PointSet parse_point_set(const json& doc, Model model, Index dim) {
  const auto& pts = require_array(field(doc, "points", "document"), "points");
  if (pts.empty()) throw InputError("points: at least one point is required");
  std::vector<double> weights(pts.size(), 1.0);
  if (doc.contains("weights")) {
    const auto& w = require_array(doc["weights"], "weights");
    if (w.size() != pts.size()) {
      throw InputError("weights: expected " + std::to_string(pts.size()) + " entries, got " + std::to_string(w.size()));
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
      weights[i] = parse_number(w[i], at("weights", i));
      if (!(weights[i] > 0.0)) throw InputError(at("weights", i) + ": weights must be positive");
    }
  }
  PointSet out;
  out.model = model;
  out.dim = dim;
  if (model == Model::poincare) {
    std::vector<RealPoint> atoms;
    for (std::size_t i = 0; i < pts.size(); ++i) atoms.push_back(parse_real_point(pts[i], dim, at("points", i)));
    out.real.emplace(atoms, weights);
  } else {
    std::vector<ComplexPoint> atoms;
    for (std::size_t i = 0; i < pts.size(); ++i) atoms.push_back(parse_complex_point(pts[i], dim, at("points", i)));
    out.complex.emplace(atoms, weights);
  }
  return out;
}

RegionSpec parse_region(const json& v, Model model, Index dim, const std::string& where) {
  const auto& variant = field(v, "variant", where);
  if (!variant.is_string()) throw InputError(where + ".variant: expected a string");
  const std::string kind = variant.get<std::string>();
  const Index d = model == Model::poincare ? dim : 2 * dim;
  if (kind == "ellipsoid") {
    return RegionSpec::ellipsoid(model, dim, parse_ambient_point(field(v, "center", where), model, dim, where + ".center"),
                                 parse_real_matrix(field(v, "shape", where), d, d, where + ".shape"));
  }
  if (kind == "ball") {
    return RegionSpec::ball(model, dim, parse_ambient_point(field(v, "center", where), model, dim, where + ".center"),
                            parse_number(field(v, "radius", where), where + ".radius"));
  }
  if (kind == "mobius_image") {
    const RegionSpec inner = parse_region(field(v, "inner", where), model, dim, where + ".inner");
    return RegionSpec::mobius_image(inner, parse_map(field(v, "map", where), model, dim, where + ".map"));
  }
  if (kind == "intersection") {
    const auto& members = require_array(field(v, "members", where), where + ".members");
    std::vector<RegionSpec> regions;
    for (std::size_t i = 0; i < members.size(); ++i) {
      regions.push_back(parse_region(members[i], model, dim, at(where + ".members", i)));
    }
    return RegionSpec::intersection(regions);
  }
  throw InputError(where + ".variant: unknown region variant '" + kind + "'");
}

json emit_region(const RegionSpec& region) {
  return std::visit(
      [&](const auto& r) -> json {
        using T = std::decay_t<decltype(r)>;
        json out;
        if constexpr (std::is_same_v<T, EllipsoidRegion>) {
          out["variant"] = "ellipsoid";
          out["center"] = emit_ambient_point(region.model(), r.center);
          json rows = json::array();
          for (Index i = 0; i < r.shape.rows(); ++i) {
            json row = json::array();
            for (Index j = 0; j < r.shape.cols(); ++j) row.push_back(format_number(r.shape(i, j)));
            rows.push_back(row);
          }
          out["shape"] = rows;
        } else if constexpr (std::is_same_v<T, BallRegion>) {
          out["variant"] = "ball";
          out["center"] = emit_ambient_point(region.model(), r.center);
          out["radius"] = format_number(r.radius);
        } else if constexpr (std::is_same_v<T, MobiusImageRegion>) {
          out["variant"] = "mobius_image";
          out["inner"] = emit_region(*r.inner);
          out["map"] = emit_map(r.map);
        } else {
          out["variant"] = "intersection";
          out["members"] = json::array();
          for (const auto& m : r.members) out["members"].push_back(emit_region(*m));
        }
        return out;
      },
      region.variant());
}

BallMap parse_map(const json& v, Model model, Index dim, const std::string& where) {
  if (!v.is_object()) throw InputError(where + ": expected an object");
  if (model == Model::poincare) {
    const RealPoint c = parse_real_point(field(v, "center", where), dim, where + ".center");
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(dim, dim);
    if (v.contains("orthogonal")) a = parse_real_matrix(v["orthogonal"], dim, dim, where + ".orthogonal");
    try {
      return RealMobius(c, a);
    } catch (const std::invalid_argument& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  const ComplexPoint c = parse_complex_point(field(v, "center", where), dim, where + ".center");
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  if (v.contains("unitary")) u = parse_complex_matrix(v["unitary"], dim, where + ".unitary");
  try {
    return ComplexAutomorphism(c, u);
  } catch (const std::invalid_argument& e) {
    throw InputError(where + ": " + e.what());
  }
}

json emit_map(const BallMap& map) {
  json out;
  if (const auto* g = std::get_if<RealMobius>(&map)) {
    out["center"] = emit_point(g->center());
    json rows = json::array();
    for (Index i = 0; i < g->dim(); ++i) {
      json row = json::array();
      for (Index j = 0; j < g->dim(); ++j) row.push_back(format_number(g->orthogonal_part()(i, j)));
      rows.push_back(row);
    }
    out["orthogonal"] = rows;
    return out;
  }
  const auto& q = std::get<ComplexAutomorphism>(map);
  out["center"] = emit_point(q.center());
  json rows = json::array();
  for (Index i = 0; i < q.dim(); ++i) {
    json row = json::array();
    for (Index j = 0; j < q.dim(); ++j) {
      const cdouble u = q.unitary_part()(i, j);
      row.push_back(json::array({format_number(u.real()), format_number(u.imag())}));
    }
    rows.push_back(row);
  }
  out["unitary"] = rows;
  return out;
}

SolverConfig parse_config(const json& v, SolverConfig base) {
  if (v.is_null()) return base;
  if (!v.is_object()) throw InputError("config: expected an object");
  auto integer = [&](const char* key, int& dst) {
    if (v.contains(key)) dst = static_cast<int>(parse_number(v[key], std::string("config.") + key));
  };
  auto real = [&](const char* key, double& dst) {
    if (v.contains(key)) dst = parse_number(v[key], std::string("config.") + key);
  };
  real("residual_tol", base.residual_tol);
  integer("max_iters", base.max_iters);
  real("initial_damping", base.initial_damping);
  real("damping_backoff", base.damping_backoff);
  integer("fallback_max_iters", base.fallback_max_iters);
  real("armijo_c", base.armijo_c);
  if (v.contains("step")) {
    const std::string s = v["step"].is_string() ? v["step"].get<std::string>() : "";
    if (s == "newton") base.step = StepRule::newton;
    else if (s == "mean") base.step = StepRule::mean;
    else throw InputError("config.step: expected \"newton\" or \"mean\"");
  }
  return base;
}

json emit_config(const SolverConfig& cfg) {
  return json{{"residual_tol", format_number(cfg.residual_tol)},
              {"max_iters", cfg.max_iters},
              {"initial_damping", format_number(cfg.initial_damping)},
              {"damping_backoff", format_number(cfg.damping_backoff)},
              {"fallback_max_iters", cfg.fallback_max_iters},
              {"armijo_c", format_number(cfg.armijo_c)},
              {"step", cfg.step == StepRule::newton ? "newton" : "mean"}};
}

json emit_trace(const std::vector<TraceEntry>& trace) {
  json out = json::array();
  for (const auto& t : trace) {
    out.push_back(json{{"iteration", t.iteration},
                       {"residual_norm", format_number(t.residual_norm)},
                       {"damping", format_number(t.damping)},
                       {"phase", t.phase == Phase::fixed_point ? "fixed_point" : "descent"}});
  }
  return out;
}

}  // namespace cbary::io
