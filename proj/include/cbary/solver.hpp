#pragma once

// Barycenter solvers. The barycenter of a measure mu is the unique point c
// with sum_i w_i h_c(y_i) = 0 (real ball) or sum_i w_i p_c(w_i) = 0 (complex
// ball); it is also the unique minimizer of the matching potential.

#include "cbary/measure.hpp"
#include "cbary/potential.hpp"

#include <complex>
#include <optional>
#include <variant>
#include <vector>

namespace cbary {

enum class StepRule {
  newton,  // b = J^{-1} r from the recentred linearization (default)
  mean,    // b = r / mass, the plain fixed-point step
};

struct SolverConfig {
  double residual_tol = 1e-10;  // scaled by total mass
  int max_iters = 500;
  double initial_damping = 1.0;
  double damping_backoff = 0.5;
  int fallback_max_iters = 2000;
  double armijo_c = 1e-4;
  StepRule step = StepRule::newton;

  void validate() const;
};

enum class Phase { fixed_point, descent };

struct TraceEntry {
  int iteration = 0;
  double residual_norm = 0.0;
  double damping = 0.0;  // step length for descent entries
  Phase phase = Phase::fixed_point;
};

struct SamplingDiagnostics {
  Index count = 0;
  Index accepted = 0;
  std::uint64_t seed = 0;
  double total_mass = 0.0;
  double mass_standard_error = 0.0;
  /// Spread of the per-sub-batch barycenters divided by sqrt(#sub-batches).
  double standard_error = 0.0;
};

template <typename Scalar>
struct BarycenterResult {
  BallPoint<Scalar> point;
  double residual_norm = 0.0;
  double potential = 0.0;
  int iterations = 0;
  std::vector<TraceEntry> method_trace;
  bool converged = false;
  std::optional<SamplingDiagnostics> sampling;
};

using RealBarycenter = BarycenterResult<double>;
using ComplexBarycenter = BarycenterResult<cdouble>;
using AnyBarycenter = std::variant<RealBarycenter, ComplexBarycenter>;

/// Raised when neither the fixed-point phase nor the descent fallback
/// reaches the residual tolerance. Carries the full trace.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, Eigen::VectorXd last_point, double residual_norm,
                   std::vector<TraceEntry> trace)
      : std::runtime_error(what),
        last_point_(std::move(last_point)),
        residual_norm_(residual_norm),
        trace_(std::move(trace)) {}

  /// Ambient real coordinates of the last iterate.
  const Eigen::VectorXd& last_point() const { return last_point_; }
  double residual_norm() const { return residual_norm_; }
  const std::vector<TraceEntry>& trace() const { return trace_; }

 private:
  Eigen::VectorXd last_point_;
  double residual_norm_;
  std::vector<TraceEntry> trace_;
};

RealBarycenter barycenter_conformal(const RealMeasure& mu, const SolverConfig& cfg = {});
ComplexBarycenter barycenter_holomorphic(const ComplexMeasure& mu, const SolverConfig& cfg = {});

/// Solver seeded from an explicit start instead of the Euclidean mean.
RealBarycenter barycenter_conformal_from(const RealMeasure& mu, const RealPoint& start,
                                         const SolverConfig& cfg = {});
ComplexBarycenter barycenter_holomorphic_from(const ComplexMeasure& mu, const ComplexPoint& start,
                                              const SolverConfig& cfg = {});

/// Samples the region and solves; the model of the result follows the region.
AnyBarycenter barycenter_region(const RegionSpec& region, DensityKind density,
                                const SolverConfig& cfg, Index count, std::uint64_t seed);

/// Closed-form barycenter (geodesic midpoint) of two points of the disk.
/// Undefined for z1 = -z2, whose barycenter is 0.
template <typename T>
std::complex<T> two_point_closed_form(std::complex<T> z1, std::complex<T> z2) {
  using std::abs;
  using std::conj;
  using std::norm;
  using std::sqrt;
  if (z1 + z2 == std::complex<T>(0)) {
    throw std::domain_error("two_point_closed_form: symmetric pair, barycenter is 0");
  }
  const T one(1);
  const T a1 = one - norm(z1);
  const T a2 = one - norm(z2);
  const T num = one - norm(z1 * z2) - sqrt(a1 * a2) * abs(one - z1 * conj(z2));
  return num / (a1 * conj(z2) + a2 * conj(z1));
}

struct InvarianceReport {
  Eigen::VectorXd barycenter;         // c1 = bary(data), ambient coordinates
  Eigen::VectorXd mapped_barycenter;  // g(c1)
  Eigen::VectorXd image_barycenter;   // c2 = bary(g(data))
  double defect = 0.0;                // |g(c1) - c2|
  double threshold = 0.0;
  bool pass = false;
};

/// Point sets: threshold 10 * residual_tol.
InvarianceReport verify_invariance(const RealMeasure& mu, const RealMobius& g, const SolverConfig& cfg);
InvarianceReport verify_invariance(const ComplexMeasure& mu, const ComplexAutomorphism& q,
                                   const SolverConfig& cfg);
/// Regions: threshold 3 combined sampling standard errors.
InvarianceReport verify_invariance(const RegionSpec& region, DensityKind density, const BallMap& map,
                                   const SolverConfig& cfg, Index count, std::uint64_t seed);

}  // namespace cbary
