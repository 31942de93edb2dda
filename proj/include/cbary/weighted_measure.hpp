#pragma once

#include "cbary/types.hpp"

#include <vector>

namespace cbary {

/// Finite positive measure: atoms (columns of `points`) with positive weights.
/// Counting measures carry unit weights; Monte-Carlo batches carry density
/// weights.
template <typename Scalar>
class WeightedMeasure {
 public:
  using Point = BallPoint<Scalar>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  WeightedMeasure(Matrix points, Eigen::VectorXd weights)
      : points_(std::move(points)), weights_(std::move(weights)) {
    if (points_.cols() == 0) throw std::invalid_argument("measure has no atoms");
    if (weights_.size() != points_.cols()) {
      throw DimensionError("measure: " + std::to_string(points_.cols()) + " atoms but " +
                           std::to_string(weights_.size()) + " weights");
    }
    if (points_.rows() < Point::min_dim) throw DimensionError("measure: dimension too small");
    for (Index i = 0; i < points_.cols(); ++i) {
      if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
        throw std::invalid_argument("measure: weight " + std::to_string(i) +
                                    " is not a positive finite number");
      }
      if (!(points_.col(i).norm() <= 1.0 - kInteriorMargin)) {
        throw DomainError("measure: atom " + std::to_string(i) +
                          " is not strictly inside the unit ball");
      }
    }
    total_mass_ = weights_.sum();
  }

  static WeightedMeasure counting(const std::vector<Point>& atoms) {
    return WeightedMeasure(atoms, std::vector<double>(atoms.size(), 1.0));
  }

  WeightedMeasure(const std::vector<Point>& atoms, const std::vector<double>& weights)
      : WeightedMeasure(stack(atoms), Eigen::Map<const Eigen::VectorXd>(
                                          weights.data(), static_cast<Index>(weights.size()))) {}

  Index size() const { return points_.cols(); }
  Index dim() const { return points_.rows(); }
  const Matrix& points() const { return points_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  double total_mass() const { return total_mass_; }
  Point atom(Index i) const { return Point::trusted(points_.col(i)); }

 private:
  static Matrix stack(const std::vector<Point>& atoms) {
    if (atoms.empty()) throw std::invalid_argument("measure has no atoms");
    Matrix m(atoms.front().dim(), static_cast<Index>(atoms.size()));
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      require_same_dim(atoms[i].dim(), m.rows(), "measure atoms");
      m.col(static_cast<Index>(i)) = atoms[i].coords();
    }
    return m;
  }

  Matrix points_;
  Eigen::VectorXd weights_;
  double total_mass_ = 0.0;
};

using RealMeasure = WeightedMeasure<double>;
using ComplexMeasure = WeightedMeasure<cdouble>;

}  // namespace cbary
