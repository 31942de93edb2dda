#include "cbary/cli.hpp"

#include "cbary/json_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace cbary {

namespace {

using io::json;

struct Options {
  std::string model;
  Index dim = 0;
  double tol = SolverConfig{}.residual_tol;
  int max_iters = SolverConfig{}.max_iters;
  std::string step = "newton";
  std::uint64_t seed = 1;
  Index samples = Index{1} << 18;
  std::string density;
  std::string format = "json";
  std::string input;
  std::string output;
  std::vector<double> bounds{-1.0, 1.0, -1.0, 1.0};
  int resolution = 101;

  // The parsed subcommand, to ask which flags were given explicitly.
  const CLI::App* sub = nullptr;
  bool given(const char* flag) const { return sub->count(flag) > 0; }
};

void add_common(CLI::App& app, Options& o) {
  const SolverConfig defaults;
  app.add_option("--model", o.model, "Ball model: poincare (R^n) or bergman (C^m)")
      ->check(CLI::IsMember({"poincare", "bergman", "poincare_n", "bergman_m"}));
  app.add_option("--dim", o.dim, "Dimension n (poincare) or m (bergman)")->check(CLI::PositiveNumber);
  app.add_option("--tol", o.tol, "Residual tolerance, relative to total mass")->capture_default_str();
  app.add_option("--max-iters", o.max_iters, "Fixed-point iteration cap")->capture_default_str();
  app.add_option("--step", o.step, "Fixed-point step rule")
      ->check(CLI::IsMember({"newton", "mean"}))
      ->capture_default_str();
  app.add_option("--seed", o.seed, "Sampling seed (selects the Sobol offset)")->capture_default_str();
  app.add_option("--samples", o.samples, "Sobol samples per region")->capture_default_str();
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--input", o.input, "Input document (default: stdin)");
  app.add_option("--output", o.output, "Output file (default: stdout)");
  app.footer("Solver defaults: residual_tol=" + io::format_number(defaults.residual_tol) +
             " max_iters=" + std::to_string(defaults.max_iters) +
             " initial_damping=" + io::format_number(defaults.initial_damping) +
             " damping_backoff=" + io::format_number(defaults.damping_backoff) +
             " fallback_max_iters=" + std::to_string(defaults.fallback_max_iters) +
             " armijo_c=" + io::format_number(defaults.armijo_c) + " step=newton");
}

json read_document(const Options& o, std::istream& in) {
  std::string text;
  if (o.input.empty()) {
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  } else {
    std::ifstream f(o.input);
    if (!f) throw io::InputError("cannot open input file '" + o.input + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  }
  try {
    json doc = json::parse(text);
    if (!doc.is_object()) throw io::InputError("document: expected a JSON object");
    return doc;
  } catch (const json::parse_error& e) {
    throw io::InputError(std::string("malformed input: ") + e.what());
  }
}

struct Resolved {
  Model model;
  Index dim;
  SolverConfig cfg;
  std::uint64_t seed;
  Index samples;
};

Resolved resolve(const Options& o, const json& doc) {
  Resolved r{};
  std::optional<Model> model;
  if (doc.contains("model")) {
    if (!doc["model"].is_string()) throw io::InputError("model: expected a string");
    model = model_from_string(doc["model"].get<std::string>());
  }
  if (o.given("--model")) {
    const Model flag = model_from_string(o.model);
    if (model && *model != flag) throw io::InputError("model: --model disagrees with the document");
    model = flag;
  }
  if (!model) throw io::InputError("model: not given (use --model or a \"model\" field)");
  r.model = *model;

  std::optional<Index> dim;
  if (doc.contains("dim")) dim = static_cast<Index>(io::parse_number(doc["dim"], "dim"));
  if (o.given("--dim")) {
    if (dim && *dim != o.dim) throw io::InputError("dim: --dim disagrees with the document");
    dim = o.dim;
  }
  if (!dim) throw io::InputError("dim: not given (use --dim or a \"dim\" field)");
  r.dim = *dim;
  const Index min_dim = r.model == Model::poincare ? 2 : 1;
  if (r.dim < min_dim) throw io::InputError("dim: must be at least " + std::to_string(min_dim));

  r.cfg = io::parse_config(doc.value("config", json()), SolverConfig{});
  if (o.given("--tol")) r.cfg.residual_tol = o.tol;
  if (o.given("--max-iters")) r.cfg.max_iters = o.max_iters;
  if (o.given("--step")) r.cfg.step = o.step == "mean" ? StepRule::mean : StepRule::newton;
  try {
    r.cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw io::InputError(std::string("config: ") + e.what());
  }

  r.seed = o.seed;
  if (!o.given("--seed") && doc.contains("seed")) {
    r.seed = static_cast<std::uint64_t>(io::parse_number(doc["seed"], "seed"));
  }
  r.samples = o.samples;
  if (!o.given("--samples") && doc.contains("samples")) {
    r.samples = static_cast<Index>(io::parse_number(doc["samples"], "samples"));
  }
  if (r.samples < 1) throw io::InputError("samples: must be at least 1");
  return r;
}

DensityKind resolve_density(const Options& o, const json& doc) {
  if (!o.density.empty()) return density_from_string(o.density);
  if (doc.contains("density")) {
    if (!doc["density"].is_string()) throw io::InputError("density: expected a string");
    return density_from_string(doc["density"].get<std::string>());
  }
  return DensityKind::hyperbolic;
}

json result_json(const char* command, Model model, Index dim, const AnyBarycenter& any,
                 const SolverConfig& cfg) {
  json out;
  out["command"] = command;
  out["model"] = to_string(model);
  out["dim"] = dim;
  std::visit(
      [&](const auto& r) {
        const json p = io::emit_point(r.point);
        out["barycenter"] = p;
        out["points"] = json::array({p});
        out["residual_norm"] = io::format_number(r.residual_norm);
        out["potential"] = io::format_number(r.potential);
        out["iterations"] = r.iterations;
        out["converged"] = r.converged;
        out["trace"] = io::emit_trace(r.method_trace);
        if (r.sampling) {
          out["sampling"] = json{{"count", r.sampling->count},
                                 {"accepted", r.sampling->accepted},
                                 {"seed", r.sampling->seed},
                                 {"total_mass", io::format_number(r.sampling->total_mass)},
                                 {"mass_standard_error", io::format_number(r.sampling->mass_standard_error)},
                                 {"standard_error", io::format_number(r.sampling->standard_error)}};
        }
      },
      any);
  out["config"] = io::emit_config(cfg);
  return out;
}

std::string result_csv(Model model, const AnyBarycenter& any) {
  std::ostringstream header, row;
  std::visit(
      [&](const auto& r) {
        Eigen::VectorXd x;
        if constexpr (std::decay_t<decltype(r.point)>::is_complex) x = to_real(r.point.coords());
        else x = r.point.coords();
        for (Index i = 0; i < x.size(); ++i) {
          if (model == Model::poincare) header << "x" << i << ",";
          else header << (i % 2 == 0 ? "re" : "im") << i / 2 << ",";
          row << io::format_number(x[i]) << ",";
        }
        header << "residual_norm,potential,iterations,converged";
        row << io::format_number(r.residual_norm) << "," << io::format_number(r.potential) << ","
            << r.iterations << "," << (r.converged ? "true" : "false");
        if (r.sampling) {
          header << ",total_mass,standard_error";
          row << "," << io::format_number(r.sampling->total_mass) << ","
              << io::format_number(r.sampling->standard_error);
        }
      },
      any);
  return header.str() + "\n" + row.str() + "\n";
}

AnyBarycenter solve_points(const io::PointSet& ps, const SolverConfig& cfg) {
  if (ps.real) return barycenter_conformal(*ps.real, cfg);
  return barycenter_holomorphic(*ps.complex, cfg);
}

struct Emitter {
  const Options& o;
  std::ostream& out;

  void operator()(const std::string& text) const {
    if (o.output.empty()) {
      out << text;
      return;
    }
    std::ofstream f(o.output);
    if (!f) throw io::InputError("cannot open output file '" + o.output + "'");
    f << text;
  }
  void json_doc(const json& doc) const { (*this)(doc.dump(2) + "\n"); }
};

int cmd_points(const Options& o, const json& doc, const Emitter& emit) {
  const Resolved r = resolve(o, doc);
  const io::PointSet ps = io::parse_point_set(doc, r.model, r.dim);
  try {
    const AnyBarycenter res = solve_points(ps, r.cfg);
    if (o.format == "csv") emit(result_csv(r.model, res));
    else emit.json_doc(result_json("points", r.model, r.dim, res, r.cfg));
    return kExitOk;
  } catch (const ConvergenceError& e) {
    json out{{"command", "points"},
             {"model", to_string(r.model)},
             {"dim", r.dim},
             {"last_point", io::emit_ambient_point(r.model, e.last_point())},
             {"residual_norm", io::format_number(e.residual_norm())},
             {"converged", false},
             {"trace", io::emit_trace(e.trace())},
             {"config", io::emit_config(r.cfg)}};
    emit.json_doc(out);
    return kExitNoConvergence;
  }
}

int cmd_region(const Options& o, const json& doc, const Emitter& emit) {
  const Resolved r = resolve(o, doc);
  const RegionSpec region = io::parse_region(doc.value("region", json()), r.model, r.dim);
  const DensityKind density = resolve_density(o, doc);
  const AnyBarycenter res = barycenter_region(region, density, r.cfg, r.samples, r.seed);
  if (o.format == "csv") {
    emit(result_csv(r.model, res));
  } else {
    json out = result_json("region", r.model, r.dim, res, r.cfg);
    out["density"] = to_string(density);
    out["region"] = io::emit_region(region);
    emit.json_doc(out);
  }
  return kExitOk;
}

int cmd_invariance(const Options& o, const json& doc, const Emitter& emit) {
  const Resolved r = resolve(o, doc);
  if (!doc.contains("map")) throw io::InputError("map: missing field");
  const BallMap map = io::parse_map(doc["map"], r.model, r.dim);
  InvarianceReport rep;
  json out{{"command", "invariance"}, {"model", to_string(r.model)}, {"dim", r.dim}};
  if (doc.contains("region")) {
    const RegionSpec region = io::parse_region(doc["region"], r.model, r.dim);
    const DensityKind density = resolve_density(o, doc);
    rep = verify_invariance(region, density, map, r.cfg, r.samples, r.seed);
    out["density"] = to_string(density);
  } else {
    const io::PointSet ps = io::parse_point_set(doc, r.model, r.dim);
    rep = ps.real ? verify_invariance(*ps.real, std::get<RealMobius>(map), r.cfg)
                  : verify_invariance(*ps.complex, std::get<ComplexAutomorphism>(map), r.cfg);
  }
  if (o.format == "csv") {
    emit("defect,threshold,pass\n" + io::format_number(rep.defect) + "," + io::format_number(rep.threshold) + "," +
         (rep.pass ? "true" : "false") + "\n");
  } else {
    out["barycenter"] = io::emit_ambient_point(r.model, rep.barycenter);
    out["mapped_barycenter"] = io::emit_ambient_point(r.model, rep.mapped_barycenter);
    out["image_barycenter"] = io::emit_ambient_point(r.model, rep.image_barycenter);
    out["defect"] = io::format_number(rep.defect);
    out["threshold"] = io::format_number(rep.threshold);
    out["pass"] = rep.pass;
    out["config"] = io::emit_config(r.cfg);
    emit.json_doc(out);
  }
  return rep.pass ? kExitOk : kExitCheckFailed;
}

int cmd_distance(const Options& o, const json& doc, const Emitter& emit) {
  const Resolved r = resolve(o, doc);
  const io::PointSet ps = io::parse_point_set(doc, r.model, r.dim);
  const Index n = ps.real ? ps.real->size() : ps.complex->size();
  if (n != 2) throw io::InputError("points: distance needs exactly two points");
  double d = 0.0;
  std::optional<double> mapped;
  if (ps.real) {
    const auto& mu = *ps.real;
    d = poincare_distance(mu.atom(0), mu.atom(1));
    if (doc.contains("map")) {
      const auto g = std::get<RealMobius>(io::parse_map(doc["map"], r.model, r.dim));
      mapped = poincare_distance(apply_mobius(g, mu.atom(0)), apply_mobius(g, mu.atom(1)));
    }
  } else {
    const auto& mu = *ps.complex;
    d = bergman_distance(mu.atom(0), mu.atom(1));
    if (doc.contains("map")) {
      const auto q = std::get<ComplexAutomorphism>(io::parse_map(doc["map"], r.model, r.dim));
      mapped = bergman_distance(apply_automorphism(q, mu.atom(0)), apply_automorphism(q, mu.atom(1)));
    }
  }
  if (o.format == "csv") {
    emit(std::string("distance") + (mapped ? ",mapped_distance" : "") + "\n" + io::format_number(d) +
         (mapped ? "," + io::format_number(*mapped) : "") + "\n");
  } else {
    json out{{"command", "distance"}, {"model", to_string(r.model)}, {"dim", r.dim}, {"distance", io::format_number(d)}};
    if (mapped) out["mapped_distance"] = io::format_number(*mapped);
    emit.json_doc(out);
  }
  return kExitOk;
}

int cmd_grid(const Options& o, const json& doc, const Emitter& emit) {
  const Resolved r = resolve(o, doc);
  if ((r.model == Model::poincare && r.dim != 2) || (r.model == Model::bergman && r.dim != 1)) {
    throw io::InputError("dim: grid supports only the planar case (poincare n=2 or bergman m=1)");
  }
  if (o.bounds.size() != 4 || !(o.bounds[0] < o.bounds[1]) || !(o.bounds[2] < o.bounds[3])) {
    throw io::InputError("bounds: expected xmin,xmax,ymin,ymax with min < max");
  }
  if (o.resolution < 2) throw io::InputError("resolution: must be at least 2");

  std::optional<RealMeasure> real;
  std::optional<ComplexMeasure> complex;
  if (doc.contains("region")) {
    const RegionSpec region = io::parse_region(doc["region"], r.model, r.dim);
    const SampleBatch batch = sample_region(region, resolve_density(o, doc), r.samples, r.seed);
    if (r.model == Model::poincare) real.emplace(batch.real_measure());
    else complex.emplace(batch.complex_measure());
  } else {
    io::PointSet ps = io::parse_point_set(doc, r.model, r.dim);
    real = std::move(ps.real);
    complex = std::move(ps.complex);
  }

  std::ostringstream csv;
  json rows = json::array();
  csv << "x,y,potential\n";
  const int res = o.resolution;
  for (int iy = 0; iy < res; ++iy) {
    const double y = o.bounds[2] + (o.bounds[3] - o.bounds[2]) * iy / (res - 1);
    for (int ix = 0; ix < res; ++ix) {
      const double x = o.bounds[0] + (o.bounds[1] - o.bounds[0]) * ix / (res - 1);
      if (!(std::hypot(x, y) < 1.0 - 1e-6)) continue;
      const double v = real ? potential_conformal(RealPoint(Eigen::Vector2d(x, y)), *real)
                            : potential_holomorphic(ComplexPoint(Eigen::VectorXcd::Constant(1, cdouble(x, y))), *complex);
      csv << io::format_number(x) << "," << io::format_number(y) << "," << io::format_number(v) << "\n";
      rows.push_back(json::array({io::format_number(x), io::format_number(y), io::format_number(v)}));
    }
  }
  if (o.format == "json") emit.json_doc(json{{"command", "grid"}, {"columns", {"x", "y", "potential"}}, {"rows", rows}});
  else emit(csv.str());
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conformal and holomorphic barycenters in hyperbolic balls"};
  app.require_subcommand(1);
  Options o;

  auto* points = app.add_subcommand("points", "Barycenter of a weighted point set");
  add_common(*points, o);
  auto* region = app.add_subcommand("region", "Barycenter of a region under a density");
  add_common(*region, o);
  region->add_option("--density", o.density, "lebesgue or hyperbolic (default hyperbolic)")
      ->check(CLI::IsMember({"lebesgue", "hyperbolic"}));
  auto* invariance = app.add_subcommand("invariance", "Check g(bary(S)) = bary(g(S)) for a ball map g");
  add_common(*invariance, o);
  invariance->add_option("--density", o.density, "lebesgue or hyperbolic (regions)")
      ->check(CLI::IsMember({"lebesgue", "hyperbolic"}));
  auto* distance = app.add_subcommand("distance", "Hyperbolic distance between two points");
  add_common(*distance, o);
  auto* grid = app.add_subcommand("grid", "Potential sampled on a planar grid (CSV x,y,potential)");
  add_common(*grid, o);
  grid->add_option("--density", o.density, "lebesgue or hyperbolic (regions)")
      ->check(CLI::IsMember({"lebesgue", "hyperbolic"}));
  grid->add_option("--bounds", o.bounds, "xmin xmax ymin ymax")->expected(4)->delimiter(',')->capture_default_str();
  grid->add_option("--resolution", o.resolution, "Grid points per axis")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }
  for (const CLI::App* s : app.get_subcommands()) o.sub = s;
  const Emitter emit{o, out};
  try {
    const json doc = read_document(o, in);
    if (points->parsed()) return cmd_points(o, doc, emit);
    if (region->parsed()) return cmd_region(o, doc, emit);
    if (invariance->parsed()) return cmd_invariance(o, doc, emit);
    if (distance->parsed()) return cmd_distance(o, doc, emit);
    return cmd_grid(o, doc, emit);
  } catch (const SamplingError& e) {
    err << "sampling error: " << e.what() << "\n";
    return kExitSampling;
  } catch (const ConvergenceError& e) {
    err << "solver error: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const std::invalid_argument& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::domain_error& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace cbary
