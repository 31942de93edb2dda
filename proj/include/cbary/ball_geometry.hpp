#pragma once

// Real hyperbolic (Poincare) ball: the involutions h_a, distance, Jacobian,
// and general Mobius maps A o h_c with A orthogonal.

#include "cbary/types.hpp"

#include <cstdint>

namespace cbary {

/// A Mobius self-map of the ball in the canonical form x -> A h_c(x).
class RealMobius {
 public:
  RealMobius(RealPoint center, Eigen::MatrixXd orthogonal_part);
  static RealMobius identity(Index n);
  /// The pure involution h_c (orthogonal part = I).
  static RealMobius involution(const RealPoint& center);

  const RealPoint& center() const { return center_; }
  const Eigen::MatrixXd& orthogonal_part() const { return orthogonal_; }
  Index dim() const { return center_.dim(); }

 private:
  RealPoint center_;
  Eigen::MatrixXd orthogonal_;
};

double rho(const RealPoint& x, const RealPoint& a);
RealPoint mobius_map(const RealPoint& a, const RealPoint& x);
double poincare_distance(const RealPoint& x, const RealPoint& y);
RealPoint apply_mobius(const RealMobius& g, const RealPoint& x);
/// g^{-1}(x) = h_c(A^T x).
RealPoint apply_mobius_inverse(const RealMobius& g, const RealPoint& x);
/// Jacobian determinant of x -> h_a(x): ((1-|a|^2)/rho(a,x))^n.
double hyperbolic_jacobian(const RealPoint& a, const RealPoint& x);
RealMobius random_mobius(std::uint64_t seed, Index n);

/// Point at fraction t of the geodesic from a to b, parametrized
/// proportionally to hyperbolic arc length.
RealPoint geodesic_point(const RealPoint& a, const RealPoint& b, double t);

namespace raw {
// Unchecked, allocation-free versions used by the reduction kernels.

inline double rho(const Eigen::Ref<const Eigen::VectorXd>& x,
                  const Eigen::Ref<const Eigen::VectorXd>& a) {
  return (x - a).squaredNorm() + (1.0 - a.squaredNorm()) * (1.0 - x.squaredNorm());
}

// h_a(x) = alpha a - beta x with alpha = (|x-a|^2 + 1-|a|^2)/rho,
// beta = (1-|a|^2)/rho.
inline void mobius_coefficients(const Eigen::Ref<const Eigen::VectorXd>& a,
                                const Eigen::Ref<const Eigen::VectorXd>& x,
                                double& alpha, double& beta) {
  const double a2 = a.squaredNorm();
  const double d2 = (x - a).squaredNorm();
  const double r = d2 + (1.0 - a2) * (1.0 - x.squaredNorm());
  alpha = (d2 + 1.0 - a2) / r;
  beta = (1.0 - a2) / r;
}

inline void mobius_map(const Eigen::Ref<const Eigen::VectorXd>& a,
                       const Eigen::Ref<const Eigen::VectorXd>& x,
                       Eigen::Ref<Eigen::VectorXd> out) {
  double alpha = 0.0, beta = 0.0;
  mobius_coefficients(a, x, alpha, beta);
  out.noalias() = alpha * a - beta * x;
}

}  // namespace raw
}  // namespace cbary
