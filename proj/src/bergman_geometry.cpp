#include "cbary/bergman_geometry.hpp"

#include <cmath>
#include <random>

namespace cbary {

ComplexAutomorphism::ComplexAutomorphism(ComplexPoint center, Eigen::MatrixXcd unitary_part)
    : center_(std::move(center)), unitary_(std::move(unitary_part)) {
  const Index m = center_.dim();
  if (unitary_.rows() != m || unitary_.cols() != m) {
    throw DimensionError("unitary part must be " + std::to_string(m) + "x" + std::to_string(m));
  }
  const double defect =
      (unitary_.adjoint() * unitary_ - Eigen::MatrixXcd::Identity(m, m)).cwiseAbs().maxCoeff();
  if (defect > 1e-12) {
    throw std::invalid_argument("unitary part has defect " + std::to_string(defect));
  }
}

ComplexAutomorphism ComplexAutomorphism::identity(Index m) {
  return ComplexAutomorphism(ComplexPoint::origin(m), Eigen::MatrixXcd::Identity(m, m));
}

ComplexAutomorphism ComplexAutomorphism::involution(const ComplexPoint& center) {
  return ComplexAutomorphism(center, Eigen::MatrixXcd::Identity(center.dim(), center.dim()));
}

cdouble inner(const Eigen::VectorXcd& z, const Eigen::VectorXcd& w) { return w.dot(z); }

Eigen::VectorXcd project_parallel(const ComplexPoint& a, const Eigen::VectorXcd& z) {
  require_same_dim(a.dim(), z.size(), "project_parallel");
  const double a2 = a.norm_squared();
  if (a2 == 0.0) return Eigen::VectorXcd::Zero(z.size());
  return (inner(z, a.coords()) / a2) * a.coords();
}

ComplexPoint bergman_automorphism(const ComplexPoint& a, const ComplexPoint& z) {
  require_same_dim(a.dim(), z.dim(), "bergman_automorphism");
  Eigen::VectorXcd out(a.dim());
  raw::bergman_automorphism(a.coords(), z.coords(), out);
  return ComplexPoint::trusted(std::move(out));
}

double bergman_distance(const ComplexPoint& z, const ComplexPoint& w) {
  require_same_dim(z.dim(), w.dim(), "bergman_distance");
  return std::atanh(std::min(bergman_automorphism(w, z).norm(), 1.0));
}

ComplexPoint apply_automorphism(const ComplexAutomorphism& q, const ComplexPoint& z) {
  require_same_dim(q.dim(), z.dim(), "apply_automorphism");
  return ComplexPoint::trusted(q.unitary_part() * bergman_automorphism(q.center(), z).coords());
}

ComplexPoint apply_automorphism_inverse(const ComplexAutomorphism& q, const ComplexPoint& z) {
  require_same_dim(q.dim(), z.dim(), "apply_automorphism_inverse");
  return bergman_automorphism(q.center(),
                              ComplexPoint::trusted(q.unitary_part().adjoint() * z.coords()));
}

double bergman_jacobian(const ComplexPoint& a, const ComplexPoint& z) {
  require_same_dim(a.dim(), z.dim(), "bergman_jacobian");
  const double ratio = (1.0 - a.norm_squared()) / std::norm(1.0 - inner(z.coords(), a.coords()));
  return std::pow(ratio, static_cast<double>(a.dim() + 1));
}

ComplexAutomorphism random_automorphism(std::uint64_t seed, Index m) {
  if (m < 1) throw DimensionError("random_automorphism needs m >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Eigen::VectorXcd dir(m);
  for (Index i = 0; i < m; ++i) dir[i] = cdouble(normal(rng), normal(rng));
  const Eigen::VectorXcd center = (0.9 * uniform(rng) / dir.norm()) * dir;

  Eigen::MatrixXcd g(m, m);
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < m; ++i) g(i, j) = cdouble(normal(rng), normal(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd u = qr.householderQ();
  // Fold the phases of R's diagonal into U so the draw is Haar.
  for (Index j = 0; j < m; ++j) {
    const cdouble d = qr.matrixQR()(j, j);
    if (std::abs(d) > 0) u.col(j) *= d / std::abs(d);
  }
  return ComplexAutomorphism(ComplexPoint(center), u);
}

ComplexPoint bergman_geodesic_point(const ComplexPoint& a, const ComplexPoint& b, double t) {
  require_same_dim(a.dim(), b.dim(), "bergman_geodesic_point");
  const ComplexPoint v = bergman_automorphism(a, b);
  const double r = v.norm();
  if (r == 0.0) return a;
  const double s = std::tanh(t * std::atanh(r));
  return bergman_automorphism(a, ComplexPoint::trusted((s / r) * v.coords()));
}

}  // namespace cbary
