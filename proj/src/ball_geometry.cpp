#include "cbary/ball_geometry.hpp"

#include <cmath>
#include <random>

namespace cbary {

const char* to_string(Model m) { return m == Model::poincare ? "poincare" : "bergman"; }

Model model_from_string(const std::string& s) {
  if (s == "poincare" || s == "poincare_n") return Model::poincare;
  if (s == "bergman" || s == "bergman_m") return Model::bergman;
  throw std::invalid_argument("unknown model '" + s + "' (expected poincare or bergman)");
}

RealMobius::RealMobius(RealPoint center, Eigen::MatrixXd orthogonal_part)
    : center_(std::move(center)), orthogonal_(std::move(orthogonal_part)) {
  const Index n = center_.dim();
  if (orthogonal_.rows() != n || orthogonal_.cols() != n) {
    throw DimensionError("orthogonal part must be " + std::to_string(n) + "x" +
                         std::to_string(n));
  }
  const double defect =
      (orthogonal_.transpose() * orthogonal_ - Eigen::MatrixXd::Identity(n, n))
          .cwiseAbs()
          .maxCoeff();
  if (defect > 1e-12) {
    throw std::invalid_argument("orthogonal part has defect " + std::to_string(defect));
  }
  if (std::abs(std::abs(orthogonal_.determinant()) - 1.0) > 1e-12) {
    throw std::invalid_argument("orthogonal part has |det| != 1");
  }
}

RealMobius RealMobius::identity(Index n) {
  return RealMobius(RealPoint::origin(n), Eigen::MatrixXd::Identity(n, n));
}

RealMobius RealMobius::involution(const RealPoint& center) {
  return RealMobius(center, Eigen::MatrixXd::Identity(center.dim(), center.dim()));
}

double rho(const RealPoint& x, const RealPoint& a) {
  require_same_dim(x.dim(), a.dim(), "rho");
  return raw::rho(x.coords(), a.coords());
}

RealPoint mobius_map(const RealPoint& a, const RealPoint& x) {
  require_same_dim(a.dim(), x.dim(), "mobius_map");
  Eigen::VectorXd out(a.dim());
  raw::mobius_map(a.coords(), x.coords(), out);
  return RealPoint::trusted(std::move(out));
}

double poincare_distance(const RealPoint& x, const RealPoint& y) {
  require_same_dim(x.dim(), y.dim(), "poincare_distance");
  const double r = (x.coords() - y.coords()).norm() / std::sqrt(raw::rho(x.coords(), y.coords()));
  return std::atanh(std::min(r, 1.0));
}

RealPoint apply_mobius(const RealMobius& g, const RealPoint& x) {
  require_same_dim(g.dim(), x.dim(), "apply_mobius");
  return RealPoint::trusted(g.orthogonal_part() * mobius_map(g.center(), x).coords());
}

RealPoint apply_mobius_inverse(const RealMobius& g, const RealPoint& x) {
  require_same_dim(g.dim(), x.dim(), "apply_mobius_inverse");
  return mobius_map(g.center(),
                    RealPoint::trusted(g.orthogonal_part().transpose() * x.coords()));
}

double hyperbolic_jacobian(const RealPoint& a, const RealPoint& x) {
  require_same_dim(a.dim(), x.dim(), "hyperbolic_jacobian");
  const double ratio = (1.0 - a.norm_squared()) / raw::rho(a.coords(), x.coords());
  return std::pow(ratio, static_cast<double>(a.dim()));
}

namespace {

// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the
// signs of R's diagonal folded into Q.
Eigen::MatrixXd random_orthogonal(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j)
    if (r(j, j) < 0) q.col(j) *= -1.0;
  return q;
}

}  // namespace

RealMobius random_mobius(std::uint64_t seed, Index n) {
  if (n < 2) throw DimensionError("random_mobius needs n >= 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Eigen::VectorXd dir(n);
  for (Index i = 0; i < n; ++i) dir[i] = normal(rng);
  const Eigen::VectorXd center = (0.9 * uniform(rng) / dir.norm()) * dir;
  return RealMobius(RealPoint(center), random_orthogonal(rng, n));
}

RealPoint geodesic_point(const RealPoint& a, const RealPoint& b, double t) {
  require_same_dim(a.dim(), b.dim(), "geodesic_point");
  const RealPoint v = mobius_map(a, b);
  const double r = v.norm();
  if (r == 0.0) return a;
  const double s = std::tanh(t * std::atanh(r));
  return mobius_map(a, RealPoint::trusted((s / r) * v.coords()));
}

}  // namespace cbary
