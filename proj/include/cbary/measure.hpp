#pragma once

// Regions strictly inside the ball, their deterministic quasi-Monte-Carlo
// sampling, and conversion of region + density into weighted atoms.
//
// Regions live in ambient real coordinates: R^n for the Poincare model and
// R^{2m} (interleaved Re/Im) for the Bergman model.

#include "cbary/ball_geometry.hpp"
#include "cbary/bergman_geometry.hpp"
#include "cbary/weighted_measure.hpp"

#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

namespace cbary {

/// Regions must keep this distance from the unit sphere.
inline constexpr double kRegionMargin = 1e-9;

using BallMap = std::variant<RealMobius, ComplexAutomorphism>;

class RegionSpec;

struct EllipsoidRegion {
  Eigen::VectorXd center;
  Eigen::MatrixXd shape;  // {x : (x-c)^T Q (x-c) < 1}
};

struct BallRegion {
  Eigen::VectorXd center;
  double radius = 0.0;
};

struct MobiusImageRegion {
  std::shared_ptr<const RegionSpec> inner;
  BallMap map;
};

struct IntersectionRegion {
  std::vector<std::shared_ptr<const RegionSpec>> members;
};

class RegionSpec {
 public:
  using Variant = std::variant<EllipsoidRegion, BallRegion, MobiusImageRegion, IntersectionRegion>;

  static RegionSpec ellipsoid(Model model, Index dim, Eigen::VectorXd center, Eigen::MatrixXd shape);
  static RegionSpec ball(Model model, Index dim, Eigen::VectorXd center, double radius);
  static RegionSpec mobius_image(const RegionSpec& inner, BallMap map);
  static RegionSpec intersection(const std::vector<RegionSpec>& members);

  Model model() const { return model_; }
  /// n for the Poincare model, m for the Bergman model.
  Index dim() const { return dim_; }
  Index ambient_dim() const { return model_ == Model::poincare ? dim_ : 2 * dim_; }
  const Variant& variant() const { return variant_; }

 private:
  RegionSpec(Model model, Index dim, Variant v) : model_(model), dim_(dim), variant_(std::move(v)) {}

  Model model_;
  Index dim_;
  Variant variant_;
};

enum class DensityKind { lebesgue, hyperbolic };

const char* to_string(DensityKind k);
DensityKind density_from_string(const std::string& s);

/// Density of the measure w.r.t. Lebesgue measure at ambient point x:
/// 1, (1-|x|^2)^{-n} (real) or (1-|z|^2)^{-(m+1)} (complex).
double density_value(DensityKind kind, Model model, Index dim, const Eigen::VectorXd& x);

struct BoundingBox {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
  double volume() const;
};

/// Exact membership in ambient real coordinates.
bool contains(const RegionSpec& region, const Eigen::VectorXd& x);
bool contains(const RegionSpec& region, const RealPoint& x);
bool contains(const RegionSpec& region, const ComplexPoint& z);

BoundingBox bounding_box(const RegionSpec& region);

/// Points on the boundary of the region (ambient coordinates, columns).
Eigen::MatrixXd boundary_sample(const RegionSpec& region);

inline constexpr int kSubBatches = 16;

struct SampleBatch {
  Model model = Model::poincare;
  Index dim = 0;
  Eigen::MatrixXd points;  // accepted points, ambient coordinates
  Eigen::VectorXd weights;
  double total_mass_estimate = 0.0;
  double standard_error = 0.0;  // of the mass estimate, from sub-batch spread
  std::uint64_t seed = 0;
  Index count = 0;
  /// Accepted atoms of sub-batch k are [sub_batch_begin[k], sub_batch_begin[k+1]).
  std::vector<Index> sub_batch_begin;

  Index accepted() const { return points.cols(); }
  int sub_batches() const { return static_cast<int>(sub_batch_begin.size()) - 1; }

  RealMeasure real_measure() const;
  ComplexMeasure complex_measure() const;
  /// Atoms of one sub-batch, weights rescaled as if it were the whole batch.
  RealMeasure real_sub_measure(int k) const;
  ComplexMeasure complex_sub_measure(int k) const;
};

/// Sobol points in the bounding box, rejected outside the region. Seed s
/// uses sequence indices [s*count, (s+1)*count), split into kSubBatches
/// contiguous sub-batches that are generated concurrently and merged in
/// order. Accepted points get weight density(x) * box volume / count.
SampleBatch sample_region(const RegionSpec& region, DensityKind density, Index count,
                          std::uint64_t seed);

/// Image of the region under a ball automorphism.
RegionSpec pushforward(const RegionSpec& region, const BallMap& map);

/// Map applied to / inverted at an ambient point (model taken from the map).
Eigen::VectorXd apply_map(const BallMap& map, const Eigen::VectorXd& x);
Eigen::VectorXd apply_map_inverse(const BallMap& map, const Eigen::VectorXd& x);

}  // namespace cbary
