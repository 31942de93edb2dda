#include "cbary/solver.hpp"

#include <cmath>
#include <functional>

namespace cbary {

namespace {

struct ConformalOps {
  using Scalar = double;
  using Point = RealPoint;
  using Measure = RealMeasure;

  static Eigen::VectorXd to_ambient(const Point& p) { return p.coords(); }
  static Point from_ambient(const Eigen::VectorXd& x) { return Point::trusted(x); }
  static LinearizedResidual linearize(const Point& c, const Measure& mu) {
    return linearize_conformal(c, mu);
  }
  static Point recentre(const Point& c, const Eigen::VectorXd& b) {
    return mobius_map(c, Point::trusted(b));
  }
  static double potential(const Point& x, const Measure& mu) { return potential_conformal(x, mu); }
  static Eigen::VectorXd gradient(const Point& x, const Measure& mu) { return grad_conformal(x, mu); }
  static double residual_norm(const Point& x, const Measure& mu) {
    return residual_conformal(x, mu).norm();
  }
};

struct HolomorphicOps {
  using Scalar = cdouble;
  using Point = ComplexPoint;
  using Measure = ComplexMeasure;

  static Eigen::VectorXd to_ambient(const Point& p) { return to_real(p.coords()); }
  static Point from_ambient(const Eigen::VectorXd& x) { return Point::trusted(to_complex(x)); }
  static LinearizedResidual linearize(const Point& c, const Measure& mu) {
    return linearize_holomorphic(c, mu);
  }
  static Point recentre(const Point& c, const Eigen::VectorXd& b) {
    return bergman_automorphism(c, Point::trusted(to_complex(b)));
  }
  static double potential(const Point& x, const Measure& mu) { return potential_holomorphic(x, mu); }
  static Eigen::VectorXd gradient(const Point& x, const Measure& mu) { return grad_holomorphic(x, mu); }
  static double residual_norm(const Point& x, const Measure& mu) {
    return residual_holomorphic(x, mu).norm();
  }
};

template <typename Ops>
typename Ops::Point euclidean_mean(const typename Ops::Measure& mu) {
  using Vector = typename Ops::Point::Vector;
  const Vector mean = mu.points() * mu.weights().template cast<typename Ops::Scalar>() / mu.total_mass();
  return Ops::Point::trusted(mean);
}

template <typename Ops>
BarycenterResult<typename Ops::Scalar> finish(const typename Ops::Measure& mu, typename Ops::Point point,
                                              double residual, int iterations,
                                              std::vector<TraceEntry> trace) {
  BarycenterResult<typename Ops::Scalar> out{std::move(point)};
  out.residual_norm = residual;
  out.potential = Ops::potential(out.point, mu);
  out.iterations = iterations;
  out.method_trace = std::move(trace);
  out.converged = true;
  return out;
}

// Damped recentred iteration: with W_i = h_c(y_i) the barycenter of mu is
// h_c(bary(W)), and bary(W) is approximated by the step b (Newton on the
// recentred residual, or the mean of W). Candidates must reduce the residual
// norm; otherwise the damping shrinks. Below damping 1e-6 the solver falls
// back to Armijo descent on the potential.
template <typename Ops>
BarycenterResult<typename Ops::Scalar> solve(const typename Ops::Measure& mu,
                                             typename Ops::Point c, const SolverConfig& cfg) {
  using Point = typename Ops::Point;
  cfg.validate();
  require_same_dim(c.dim(), mu.dim(), "barycenter start");
  const double mass = mu.total_mass();
  const double target = cfg.residual_tol * mass;
  std::vector<TraceEntry> trace;

  if (mu.size() == 1) {
    return finish<Ops>(mu, mu.atom(0), 0.0, 0, std::move(trace));
  }

  LinearizedResidual lin = Ops::linearize(c, mu);
  double res = lin.residual.norm();
  trace.push_back({0, res, 0.0, Phase::fixed_point});
  int it = 0;
  while (res > target && it < cfg.max_iters) {
    ++it;
    const Eigen::VectorXd step = cfg.step == StepRule::newton
                                     ? Eigen::VectorXd(lin.jacobian.partialPivLu().solve(lin.residual))
                                     : Eigen::VectorXd(lin.residual / mass);
    double tau = cfg.initial_damping;
    bool accepted = false;
    while (tau >= 1e-6) {
      const Eigen::VectorXd b = tau * step;
      if (b.norm() < 1.0 - kInteriorMargin) {
        Point cand = Ops::recentre(c, b);
        LinearizedResidual cand_lin = Ops::linearize(cand, mu);
        const double cand_res = cand_lin.residual.norm();
        if (cand_res < res) {
          c = std::move(cand);
          lin = std::move(cand_lin);
          res = cand_res;
          accepted = true;
          break;
        }
      }
      tau *= cfg.damping_backoff;
    }
    if (!accepted) break;
    trace.push_back({it, res, tau, Phase::fixed_point});
  }
  if (res <= target) return finish<Ops>(mu, std::move(c), res, it, std::move(trace));

  // Armijo backtracking descent on the (geodesically convex) potential.
  double f = Ops::potential(c, mu);
  double t = 1.0 / mass;
  for (int k = 0; k < cfg.fallback_max_iters; ++k) {
    const Eigen::VectorXd g = Ops::gradient(c, mu);
    const double g2 = g.squaredNorm();
    const Eigen::VectorXd x = Ops::to_ambient(c);
    bool moved = false;
    while (t > 1e-300) {
      const Eigen::VectorXd xn = x - t * g;
      if (xn.norm() < 1.0 - kInteriorMargin) {
        Point cand = Ops::from_ambient(xn);
        const double fn = Ops::potential(cand, mu);
        if (fn <= f - cfg.armijo_c * t * g2) {
          c = std::move(cand);
          f = fn;
          moved = true;
          break;
        }
      }
      t *= 0.5;
    }
    ++it;
    res = Ops::residual_norm(c, mu);
    trace.push_back({it, res, t, Phase::descent});
    if (res <= target) return finish<Ops>(mu, std::move(c), res, it, std::move(trace));
    if (!moved) break;
    t *= 2.0;
  }
  throw ConvergenceError("barycenter did not converge: residual " + std::to_string(res) +
                             " > tolerance " + std::to_string(target),
                         Ops::to_ambient(c), res, std::move(trace));
}

double spread_standard_error(const std::vector<Eigen::VectorXd>& pts) {
  const auto k = static_cast<double>(pts.size());
  if (pts.size() < 2) return std::numeric_limits<double>::infinity();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(pts.front().size());
  for (const auto& p : pts) mean += p;
  mean /= k;
  double ss = 0.0;
  for (const auto& p : pts) ss += (p - mean).squaredNorm();
  return std::sqrt(ss / (k - 1.0) / k);
}

template <typename Ops, typename Result>
Result solve_region(const SampleBatch& batch, const typename Ops::Measure& full,
                    const SolverConfig& cfg, const std::function<typename Ops::Measure(int)>& sub) {
  Result r = solve<Ops>(full, euclidean_mean<Ops>(full), cfg);
  std::vector<Eigen::VectorXd> subs;
  for (int k = 0; k < batch.sub_batches(); ++k) {
    const auto m = sub(k);
    subs.push_back(Ops::to_ambient(solve<Ops>(m, euclidean_mean<Ops>(m), cfg).point));
  }
  SamplingDiagnostics diag;
  diag.count = batch.count;
  diag.accepted = batch.accepted();
  diag.seed = batch.seed;
  diag.total_mass = batch.total_mass_estimate;
  diag.mass_standard_error = batch.standard_error;
  diag.standard_error = spread_standard_error(subs);
  r.sampling = diag;
  return r;
}

Eigen::VectorXd ambient(const AnyBarycenter& r) {
  if (const auto* p = std::get_if<RealBarycenter>(&r)) return p->point.coords();
  return to_real(std::get<ComplexBarycenter>(r).point.coords());
}

double sampling_se(const AnyBarycenter& r) {
  return std::visit([](const auto& v) { return v.sampling ? v.sampling->standard_error : 0.0; }, r);
}

}  // namespace

void SolverConfig::validate() const {
  if (!(residual_tol > 0.0)) throw std::invalid_argument("residual_tol must be positive");
  if (max_iters < 0) throw std::invalid_argument("max_iters must be non-negative");
  if (!(initial_damping > 0.0 && initial_damping <= 1.0)) {
    throw std::invalid_argument("initial_damping must lie in (0, 1]");
  }
  if (!(damping_backoff > 0.0 && damping_backoff < 1.0)) {
    throw std::invalid_argument("damping_backoff must lie in (0, 1)");
  }
  if (fallback_max_iters < 0) throw std::invalid_argument("fallback_max_iters must be non-negative");
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) throw std::invalid_argument("armijo_c must lie in (0, 1)");
}

RealBarycenter barycenter_conformal(const RealMeasure& mu, const SolverConfig& cfg) {
  return solve<ConformalOps>(mu, euclidean_mean<ConformalOps>(mu), cfg);
}

ComplexBarycenter barycenter_holomorphic(const ComplexMeasure& mu, const SolverConfig& cfg) {
  return solve<HolomorphicOps>(mu, euclidean_mean<HolomorphicOps>(mu), cfg);
}

RealBarycenter barycenter_conformal_from(const RealMeasure& mu, const RealPoint& start,
                                         const SolverConfig& cfg) {
  return solve<ConformalOps>(mu, start, cfg);
}

ComplexBarycenter barycenter_holomorphic_from(const ComplexMeasure& mu, const ComplexPoint& start,
                                              const SolverConfig& cfg) {
  return solve<HolomorphicOps>(mu, start, cfg);
}

AnyBarycenter barycenter_region(const RegionSpec& region, DensityKind density,
                                const SolverConfig& cfg, Index count, std::uint64_t seed) {
  const SampleBatch batch = sample_region(region, density, count, seed);
  if (region.model() == Model::poincare) {
    return solve_region<ConformalOps, RealBarycenter>(
        batch, batch.real_measure(), cfg, [&](int k) { return batch.real_sub_measure(k); });
  }
  return solve_region<HolomorphicOps, ComplexBarycenter>(
      batch, batch.complex_measure(), cfg, [&](int k) { return batch.complex_sub_measure(k); });
}

InvarianceReport verify_invariance(const RealMeasure& mu, const RealMobius& g, const SolverConfig& cfg) {
  InvarianceReport rep;
  const RealBarycenter c1 = barycenter_conformal(mu, cfg);
  const RealBarycenter c2 = barycenter_conformal(map_atoms(mu, g), cfg);
  rep.barycenter = c1.point.coords();
  rep.mapped_barycenter = apply_mobius(g, c1.point).coords();
  rep.image_barycenter = c2.point.coords();
  rep.defect = (rep.mapped_barycenter - rep.image_barycenter).norm();
  rep.threshold = 10.0 * cfg.residual_tol;
  rep.pass = rep.defect <= rep.threshold;
  return rep;
}

InvarianceReport verify_invariance(const ComplexMeasure& mu, const ComplexAutomorphism& q,
                                   const SolverConfig& cfg) {
  InvarianceReport rep;
  const ComplexBarycenter c1 = barycenter_holomorphic(mu, cfg);
  const ComplexBarycenter c2 = barycenter_holomorphic(map_atoms(mu, q), cfg);
  rep.barycenter = to_real(c1.point.coords());
  rep.mapped_barycenter = to_real(apply_automorphism(q, c1.point).coords());
  rep.image_barycenter = to_real(c2.point.coords());
  rep.defect = (rep.mapped_barycenter - rep.image_barycenter).norm();
  rep.threshold = 10.0 * cfg.residual_tol;
  rep.pass = rep.defect <= rep.threshold;
  return rep;
}

InvarianceReport verify_invariance(const RegionSpec& region, DensityKind density, const BallMap& map,
                                   const SolverConfig& cfg, Index count, std::uint64_t seed) {
  const AnyBarycenter r1 = barycenter_region(region, density, cfg, count, seed);
  const AnyBarycenter r2 = barycenter_region(pushforward(region, map), density, cfg, count, seed);
  InvarianceReport rep;
  rep.barycenter = ambient(r1);
  rep.mapped_barycenter = apply_map(map, rep.barycenter);
  rep.image_barycenter = ambient(r2);
  rep.defect = (rep.mapped_barycenter - rep.image_barycenter).norm();
  // The map stretches the first estimate's error by at most this factor.
  const double k = (1.0 - rep.mapped_barycenter.squaredNorm()) / (1.0 - rep.barycenter.squaredNorm());
  const double stretch = region.model() == Model::poincare ? k : std::max(k, std::sqrt(k));
  rep.threshold = 3.0 * std::hypot(stretch * sampling_se(r1), sampling_se(r2));
  rep.pass = rep.defect <= rep.threshold;
  return rep;
}

}  // namespace cbary
