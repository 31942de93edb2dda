#pragma once

// Complex (Bergman) ball in C^m. Inner product <z,w> = sum z_k conj(w_k),
// linear in the first slot.

#include "cbary/types.hpp"

#include <cstdint>

namespace cbary {

/// A holomorphic automorphism in the canonical form z -> U p_c(z).
class ComplexAutomorphism {
 public:
  ComplexAutomorphism(ComplexPoint center, Eigen::MatrixXcd unitary_part);
  static ComplexAutomorphism identity(Index m);
  static ComplexAutomorphism involution(const ComplexPoint& center);

  const ComplexPoint& center() const { return center_; }
  const Eigen::MatrixXcd& unitary_part() const { return unitary_; }
  Index dim() const { return center_.dim(); }

 private:
  ComplexPoint center_;
  Eigen::MatrixXcd unitary_;
};

cdouble inner(const Eigen::VectorXcd& z, const Eigen::VectorXcd& w);

/// P_a z = <z,a> a / <a,a>, with P_0 = 0.
Eigen::VectorXcd project_parallel(const ComplexPoint& a, const Eigen::VectorXcd& z);
ComplexPoint bergman_automorphism(const ComplexPoint& a, const ComplexPoint& z);
double bergman_distance(const ComplexPoint& z, const ComplexPoint& w);
ComplexPoint apply_automorphism(const ComplexAutomorphism& q, const ComplexPoint& z);
/// q^{-1}(z) = p_c(U^* z).
ComplexPoint apply_automorphism_inverse(const ComplexAutomorphism& q, const ComplexPoint& z);
/// ((1-|a|^2)/|1-<z,a>|^2)^{m+1}.
double bergman_jacobian(const ComplexPoint& a, const ComplexPoint& z);
ComplexAutomorphism random_automorphism(std::uint64_t seed, Index m);

/// Bergman geodesic from a to b at arc-length fraction t (p_a-conjugated
/// radial segment).
ComplexPoint bergman_geodesic_point(const ComplexPoint& a, const ComplexPoint& b, double t);

namespace raw {

// p_a(z) = (a - s z - <z,a>/(1+s) a) / (1 - <z,a>), s = sqrt(1-|a|^2).
// Uses s Q_a + P_a = s I + (1-s) P_a and (1-s)/|a|^2 = 1/(1+s), which
// also covers a = 0.
inline void bergman_automorphism(const Eigen::Ref<const Eigen::VectorXcd>& a,
                                 const Eigen::Ref<const Eigen::VectorXcd>& z,
                                 Eigen::Ref<Eigen::VectorXcd> out) {
  const double s = std::sqrt(1.0 - a.squaredNorm());
  const cdouble za = a.dot(z);  // Eigen's dot conjugates its left operand.
  const cdouble denom = 1.0 - za;
  out.noalias() = (a * (1.0 - za / (1.0 + s)) - s * z) / denom;
}

}  // namespace raw
}  // namespace cbary
