#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace cbary {

using Index = Eigen::Index;
using cdouble = std::complex<double>;

/// Points closer than this to the unit sphere are rejected at construction.
inline constexpr double kInteriorMargin = 1e-12;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A point is on or outside the admissible interior of the ball.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Rejection sampling accepted too few points to trust the estimate.
class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Model { poincare, bergman };

const char* to_string(Model m);
Model model_from_string(const std::string& s);

// A vector in the open unit ball of R^n (Scalar = double) or C^m
// (Scalar = complex<double>). Public construction enforces the interior
// margin; `trusted` is for images of interior points under ball maps, which
// are interior by construction but may drift inside the margin in floating
// point.
template <typename Scalar>
class BallPoint {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  static constexpr bool is_complex = !std::is_same_v<Scalar, double>;
  static constexpr Index min_dim = is_complex ? 1 : 2;

  explicit BallPoint(Vector coords) : coords_(std::move(coords)) {
    check_dim(coords_.size());
    const double r2 = coords_.squaredNorm();
    if (!std::isfinite(r2) || std::sqrt(r2) > 1.0 - kInteriorMargin) {
      throw DomainError("point is not strictly inside the unit ball (|x| = " +
                        std::to_string(std::sqrt(r2)) + ")");
    }
  }

  static BallPoint trusted(Vector coords) {
    check_dim(coords.size());
    if (!(coords.squaredNorm() < 1.0)) {
      throw DomainError("map image left the unit ball");
    }
    return BallPoint(std::move(coords), TrustedTag{});
  }

  static BallPoint origin(Index dim) { return BallPoint(Vector::Zero(dim)); }

  const Vector& coords() const { return coords_; }
  Index dim() const { return coords_.size(); }
  double norm_squared() const { return coords_.squaredNorm(); }
  double norm() const { return coords_.norm(); }

  friend bool operator==(const BallPoint& a, const BallPoint& b) {
    return a.coords_ == b.coords_;
  }

 private:
  struct TrustedTag {};
  BallPoint(Vector coords, TrustedTag) : coords_(std::move(coords)) {}

  static void check_dim(Index n) {
    if (n < min_dim) {
      throw DimensionError("ball dimension " + std::to_string(n) +
                           " is below the minimum " + std::to_string(min_dim));
    }
  }

  Vector coords_;
};

using RealPoint = BallPoint<double>;
using ComplexPoint = BallPoint<cdouble>;

inline void require_same_dim(Index a, Index b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" +
                         std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

// C^m is identified with R^{2m} by interleaving (Re z_1, Im z_1, Re z_2, ...).
inline Eigen::VectorXd to_real(const Eigen::VectorXcd& z) {
  Eigen::VectorXd out(2 * z.size());
  for (Index k = 0; k < z.size(); ++k) {
    out[2 * k] = z[k].real();
    out[2 * k + 1] = z[k].imag();
  }
  return out;
}

inline Eigen::VectorXcd to_complex(const Eigen::VectorXd& x) {
  if (x.size() % 2 != 0) {
    throw DimensionError("real vector of odd length cannot be read as C^m");
  }
  Eigen::VectorXcd out(x.size() / 2);
  for (Index k = 0; k < out.size(); ++k) out[k] = cdouble(x[2 * k], x[2 * k + 1]);
  return out;
}

}  // namespace cbary
