#pragma once

#include "cbary/ball_geometry.hpp"
#include "cbary/bergman_geometry.hpp"
#include "cbary/weighted_measure.hpp"

#include <random>
#include <vector>

namespace cbary::testing {

// Uniform-direction point with |x| <= max_radius, drawn from `rng`.
inline Eigen::VectorXd random_vector_in_ball(std::mt19937_64& rng, Index d, double max_radius) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd v(d);
  for (Index i = 0; i < d; ++i) v[i] = g(rng);
  return v.normalized() * (max_radius * std::pow(u(rng), 1.0 / static_cast<double>(d)));
}

inline RealPoint random_real_point(std::mt19937_64& rng, Index n, double max_radius = 0.95) {
  return RealPoint(random_vector_in_ball(rng, n, max_radius));
}

inline ComplexPoint random_complex_point(std::mt19937_64& rng, Index m, double max_radius = 0.95) {
  return ComplexPoint(to_complex(random_vector_in_ball(rng, 2 * m, max_radius)));
}

inline RealMeasure random_real_measure(std::mt19937_64& rng, Index n, Index atoms, double max_radius = 0.9) {
  std::uniform_real_distribution<double> w(0.2, 2.0);
  Eigen::MatrixXd p(n, atoms);
  Eigen::VectorXd weights(atoms);
  for (Index i = 0; i < atoms; ++i) {
    p.col(i) = random_vector_in_ball(rng, n, max_radius);
    weights[i] = w(rng);
  }
  return RealMeasure(p, weights);
}

inline ComplexMeasure random_complex_measure(std::mt19937_64& rng, Index m, Index atoms, double max_radius = 0.9) {
  std::uniform_real_distribution<double> w(0.2, 2.0);
  Eigen::MatrixXcd p(m, atoms);
  Eigen::VectorXd weights(atoms);
  for (Index i = 0; i < atoms; ++i) {
    p.col(i) = to_complex(random_vector_in_ball(rng, 2 * m, max_radius));
    weights[i] = w(rng);
  }
  return ComplexMeasure(p, weights);
}

// C^m as R^2m by interleaving, applied atom by atom.
inline RealMeasure as_real(const ComplexMeasure& mu) {
  Eigen::MatrixXd p(2 * mu.dim(), mu.size());
  for (Index i = 0; i < mu.size(); ++i) p.col(i) = to_real(mu.points().col(i));
  return RealMeasure(p, mu.weights());
}

inline ComplexMeasure as_complex(const RealMeasure& mu) {
  Eigen::MatrixXcd p(mu.dim() / 2, mu.size());
  for (Index i = 0; i < mu.size(); ++i) p.col(i) = to_complex(mu.points().col(i));
  return ComplexMeasure(p, mu.weights());
}

inline double relative_error(double got, double want, double floor = 1e-300) {
  return std::abs(got - want) / std::max(std::abs(want), floor);
}

inline RealPoint real2(double x, double y) { return RealPoint(Eigen::Vector2d(x, y)); }

inline ComplexPoint complex1(cdouble z) { return ComplexPoint(Eigen::VectorXcd::Constant(1, z)); }

// The planar example {0, 1/2, i/2} in both encodings.
inline RealMeasure three_point_real() {
  return RealMeasure::counting({real2(0, 0), real2(0.5, 0), real2(0, 0.5)});
}
inline ComplexMeasure three_point_complex() {
  return ComplexMeasure::counting({complex1(0.0), complex1(0.5), complex1(cdouble(0, 0.5))});
}

}  // namespace cbary::testing
