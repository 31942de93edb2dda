#pragma once

// Structured-text schema shared by the CLI input and output documents.
//
//   {"model": "poincare" | "bergman", "dim": N,
//    "points": [point, ...], "weights": [w, ...],          (point sets)
//    "region": region, "density": "lebesgue"|"hyperbolic", (regions)
//    "map": {"center": point, "orthogonal"|"unitary": matrix},
//    "samples": M, "seed": S, "config": {...}}
//
// Numbers may be JSON numbers or decimal strings; writers always emit decimal
// strings with 17 significant digits. A real point is [x1, ..., xn]; a complex
// point is [[re1, im1], ..., [rem, imm]]. Complex matrices use the same pair
// encoding per entry. Region objects carry "variant" plus:
//   ellipsoid:    "center" (point), "shape" (ambient real matrix)
//   ball:         "center", "radius"
//   mobius_image: "inner" (region), "map"
//   intersection: "members" (list of regions)

#include "cbary/measure.hpp"
#include "cbary/solver.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace cbary::io {

using json = nlohmann::json;

/// Malformed input; the message names the offending field.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

double parse_number(const json& v, const std::string& where);
std::string format_number(double x);

RealPoint parse_real_point(const json& v, Index n, const std::string& where);
ComplexPoint parse_complex_point(const json& v, Index m, const std::string& where);
json emit_point(const RealPoint& p);
json emit_point(const ComplexPoint& p);
json emit_ambient_point(Model model, const Eigen::VectorXd& x);

struct PointSet {
  Model model = Model::poincare;
  Index dim = 0;
  std::optional<RealMeasure> real;
  std::optional<ComplexMeasure> complex;
};

/// Reads "points" and optional "weights" (default: counting measure).
PointSet parse_point_set(const json& doc, Model model, Index dim);

RegionSpec parse_region(const json& v, Model model, Index dim, const std::string& where = "region");
json emit_region(const RegionSpec& region);

BallMap parse_map(const json& v, Model model, Index dim, const std::string& where = "map");
json emit_map(const BallMap& map);

/// Applies the optional "config" object of a document on top of `base`.
SolverConfig parse_config(const json& v, SolverConfig base);
json emit_config(const SolverConfig& cfg);

json emit_trace(const std::vector<TraceEntry>& trace);

}  // namespace cbary::io
