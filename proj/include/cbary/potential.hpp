#pragma once

// The barycentric potentials
//   G(x) = -sum_i w_i log[(1-|x|^2)(1-|y_i|^2) / rho(x, y_i)]        (real ball)
//   L(z) = -sum_i w_i log[(1-|z|^2)(1-|w_i|^2) / |1-<z,w_i>|^2]     (complex ball)
// their gradients, and the residual fields c -> sum_i w_i h_c(y_i) and
// c -> sum_i w_i p_c(w_i) whose unique zero is the barycenter.
//
// Gradients are in ambient real coordinates; for C^m that is R^{2m} with
// interleaved (Re, Im) pairs.

#include "cbary/ball_geometry.hpp"
#include "cbary/bergman_geometry.hpp"
#include "cbary/parallel.hpp"
#include "cbary/weighted_measure.hpp"

namespace cbary {

double potential_conformal(const RealPoint& x, const RealMeasure& mu, Exec exec = Exec::parallel);
double potential_holomorphic(const ComplexPoint& z, const ComplexMeasure& mu,
                             Exec exec = Exec::parallel);

/// Same potentials written as sum_i w_i log cosh^2 d(x, y_i).
double potential_conformal_logcosh(const RealPoint& x, const RealMeasure& mu);
double potential_holomorphic_logcosh(const ComplexPoint& z, const ComplexMeasure& mu);

Eigen::VectorXd grad_conformal(const RealPoint& x, const RealMeasure& mu,
                               Exec exec = Exec::parallel);
/// Real gradient in R^{2m}; as a complex vector (d/dx + i d/dy) it is
/// sum_i w_i [2z/(1-|z|^2) - 2w_i/(1-<w_i,z>)].
Eigen::VectorXd grad_holomorphic(const ComplexPoint& z, const ComplexMeasure& mu,
                                 Exec exec = Exec::parallel);

Eigen::VectorXd residual_conformal(const RealPoint& c, const RealMeasure& mu,
                                   Exec exec = Exec::parallel);
Eigen::VectorXcd residual_holomorphic(const ComplexPoint& c, const ComplexMeasure& mu,
                                      Exec exec = Exec::parallel);

/// Residual at c together with the real Jacobian of b -> sum_i w_i h_b(h_c(y_i))
/// at b = 0, i.e. the linearization of the residual in the frame recentred at c.
/// It is symmetric positive definite for real data.
struct LinearizedResidual {
  Eigen::VectorXd residual;  // real coordinates (interleaved for C^m)
  Eigen::MatrixXd jacobian;
};

LinearizedResidual linearize_conformal(const RealPoint& c, const RealMeasure& mu,
                                       Exec exec = Exec::parallel);
LinearizedResidual linearize_holomorphic(const ComplexPoint& c, const ComplexMeasure& mu,
                                         Exec exec = Exec::parallel);

/// Image measure: atoms pushed through the map, weights unchanged.
RealMeasure map_atoms(const RealMeasure& mu, const RealMobius& g);
ComplexMeasure map_atoms(const ComplexMeasure& mu, const ComplexAutomorphism& q);

}  // namespace cbary
