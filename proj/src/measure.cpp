#include "cbary/measure.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <boost/random/sobol.hpp>

#include <cmath>
#include <numbers>

namespace cbary {

namespace {

constexpr double kBoxPad = 1e-3;

Index ambient(Model model, Index dim) { return model == Model::poincare ? dim : 2 * dim; }

void check_center(Model model, Index dim, const Eigen::VectorXd& center) {
  require_same_dim(center.size(), ambient(model, dim), "region center");
  if (model == Model::poincare && dim < 2) throw DimensionError("Poincare regions need n >= 2");
  if (model == Model::bergman && dim < 1) throw DimensionError("Bergman regions need m >= 1");
}

Index map_dim(const BallMap& map) {
  return std::visit([](const auto& g) { return g.dim(); }, map);
}

Model map_model(const BallMap& map) {
  return std::holds_alternative<RealMobius>(map) ? Model::poincare : Model::bergman;
}

// Deterministic, roughly uniform directions on the unit sphere in R^d.
Eigen::MatrixXd sphere_directions(Index d) {
  if (d == 1) {
    Eigen::MatrixXd out(1, 2);
    out << -1.0, 1.0;
    return out;
  }
  if (d == 2) {
    constexpr Index n = 4096;
    Eigen::MatrixXd out(2, n);
    for (Index k = 0; k < n; ++k) {
      const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / n;
      out(0, k) = std::cos(t);
      out(1, k) = std::sin(t);
    }
    return out;
  }
  const Index n = std::min<Index>(4096 << (d - 2), 1 << 17);
  boost::random::sobol eng(static_cast<std::size_t>(d));
  eng.seed(1);
  Eigen::MatrixXd out(d, n);
  for (Index k = 0; k < n; ++k) {
    for (Index j = 0; j < d; ++j) {
      const double u = (static_cast<double>(eng()) + 0.5) * 0x1p-64;
      out(j, k) = std::sqrt(2.0) * boost::math::erf_inv(2.0 * std::clamp(u, 1e-15, 1 - 1e-15) - 1.0);
    }
    out.col(k).normalize();
  }
  return out;
}

BoundingBox box_of_columns(const Eigen::MatrixXd& pts, double pad) {
  BoundingBox box;
  box.lo = (pts.rowwise().minCoeff().array() - pad).max(-1.0).matrix();
  box.hi = (pts.rowwise().maxCoeff().array() + pad).min(1.0).matrix();
  return box;
}

}  // namespace

const char* to_string(DensityKind k) { return k == DensityKind::lebesgue ? "lebesgue" : "hyperbolic"; }

DensityKind density_from_string(const std::string& s) {
  if (s == "lebesgue") return DensityKind::lebesgue;
  if (s == "hyperbolic") return DensityKind::hyperbolic;
  throw std::invalid_argument("unknown density '" + s + "' (expected lebesgue or hyperbolic)");
}

double density_value(DensityKind kind, Model model, Index dim, const Eigen::VectorXd& x) {
  if (kind == DensityKind::lebesgue) return 1.0;
  const double exponent = model == Model::poincare ? static_cast<double>(dim) : static_cast<double>(dim + 1);
  return std::pow(1.0 - x.squaredNorm(), -exponent);
}

double BoundingBox::volume() const {
  double v = 1.0;
  for (Index j = 0; j < lo.size(); ++j) v *= std::max(0.0, hi[j] - lo[j]);
  return v;
}

RegionSpec RegionSpec::ellipsoid(Model model, Index dim, Eigen::VectorXd center, Eigen::MatrixXd shape) {
  check_center(model, dim, center);
  const Index d = center.size();
  if (shape.rows() != d || shape.cols() != d) throw DimensionError("ellipsoid shape matrix has wrong size");
  const double scale = shape.cwiseAbs().maxCoeff();
  if ((shape - shape.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("ellipsoid shape matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(shape);
  const double lmin = eig.eigenvalues().minCoeff();
  if (!(lmin > 0.0)) throw std::invalid_argument("ellipsoid shape matrix is not positive definite");
  if (center.norm() + 1.0 / std::sqrt(lmin) > 1.0 - kRegionMargin) {
    throw DomainError("ellipsoid is not strictly inside the unit ball");
  }
  return RegionSpec(model, dim, EllipsoidRegion{std::move(center), std::move(shape)});
}

RegionSpec RegionSpec::ball(Model model, Index dim, Eigen::VectorXd center, double radius) {
  check_center(model, dim, center);
  if (!(radius > 0.0)) throw std::invalid_argument("ball radius must be positive");
  if (center.norm() + radius > 1.0 - kRegionMargin) {
    throw DomainError("ball region is not strictly inside the unit ball");
  }
  return RegionSpec(model, dim, BallRegion{std::move(center), radius});
}

RegionSpec RegionSpec::mobius_image(const RegionSpec& inner, BallMap map) {
  if (map_model(map) != inner.model()) throw std::invalid_argument("map model does not match region model");
  require_same_dim(map_dim(map), inner.dim(), "mobius_image");
  RegionSpec out(inner.model(), inner.dim(),
                 MobiusImageRegion{std::make_shared<const RegionSpec>(inner), std::move(map)});
  const Eigen::MatrixXd edge = boundary_sample(out);
  if (edge.cols() > 0 && edge.colwise().norm().maxCoeff() > 1.0 - kRegionMargin) {
    throw DomainError("image region reaches the unit sphere");
  }
  return out;
}

RegionSpec RegionSpec::intersection(const std::vector<RegionSpec>& members) {
  if (members.empty()) throw std::invalid_argument("intersection needs at least one member");
  IntersectionRegion v;
  for (const auto& m : members) {
    if (m.model() != members.front().model()) throw std::invalid_argument("intersection mixes models");
    require_same_dim(m.dim(), members.front().dim(), "intersection");
    v.members.push_back(std::make_shared<const RegionSpec>(m));
  }
  return RegionSpec(members.front().model(), members.front().dim(), std::move(v));
}

Eigen::VectorXd apply_map(const BallMap& map, const Eigen::VectorXd& x) {
  if (const auto* g = std::get_if<RealMobius>(&map)) {
    return apply_mobius(*g, RealPoint::trusted(x)).coords();
  }
  const auto& q = std::get<ComplexAutomorphism>(map);
  return to_real(apply_automorphism(q, ComplexPoint::trusted(to_complex(x))).coords());
}

Eigen::VectorXd apply_map_inverse(const BallMap& map, const Eigen::VectorXd& x) {
  if (const auto* g = std::get_if<RealMobius>(&map)) {
    return apply_mobius_inverse(*g, RealPoint::trusted(x)).coords();
  }
  const auto& q = std::get<ComplexAutomorphism>(map);
  return to_real(apply_automorphism_inverse(q, ComplexPoint::trusted(to_complex(x))).coords());
}

bool contains(const RegionSpec& region, const Eigen::VectorXd& x) {
  require_same_dim(x.size(), region.ambient_dim(), "contains");
  return std::visit(
      [&](const auto& r) -> bool {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, EllipsoidRegion>) {
          const Eigen::VectorXd d = x - r.center;
          return d.dot(r.shape * d) < 1.0;
        } else if constexpr (std::is_same_v<T, BallRegion>) {
          return (x - r.center).norm() < r.radius;
        } else if constexpr (std::is_same_v<T, MobiusImageRegion>) {
          if (!(x.squaredNorm() < 1.0)) return false;
          return contains(*r.inner, apply_map_inverse(r.map, x));
        } else {
          for (const auto& m : r.members)
            if (!contains(*m, x)) return false;
          return true;
        }
      },
      region.variant());
}

bool contains(const RegionSpec& region, const RealPoint& x) {
  if (region.model() != Model::poincare) throw std::invalid_argument("contains: model mismatch");
  return contains(region, x.coords());
}

bool contains(const RegionSpec& region, const ComplexPoint& z) {
  if (region.model() != Model::bergman) throw std::invalid_argument("contains: model mismatch");
  return contains(region, to_real(z.coords()));
}

Eigen::MatrixXd boundary_sample(const RegionSpec& region) {
  return std::visit(
      [&](const auto& r) -> Eigen::MatrixXd {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, EllipsoidRegion>) {
          // Q = L L^T, x = c + L^{-T} u lies on the boundary for |u| = 1.
          const Eigen::LLT<Eigen::MatrixXd> llt(r.shape);
          Eigen::MatrixXd pts = llt.matrixU().solve(sphere_directions(r.center.size()));
          pts.colwise() += r.center;
          return pts;
        } else if constexpr (std::is_same_v<T, BallRegion>) {
          Eigen::MatrixXd pts = r.radius * sphere_directions(r.center.size());
          pts.colwise() += r.center;
          return pts;
        } else if constexpr (std::is_same_v<T, MobiusImageRegion>) {
          const Eigen::MatrixXd inner = boundary_sample(*r.inner);
          Eigen::MatrixXd pts(inner.rows(), inner.cols());
          for (Index k = 0; k < inner.cols(); ++k) pts.col(k) = apply_map(r.map, inner.col(k));
          return pts;
        } else {
          // Boundary of an intersection: boundary points of one member lying
          // inside every other member.
          std::vector<Eigen::VectorXd> kept;
          for (std::size_t i = 0; i < r.members.size(); ++i) {
            const Eigen::MatrixXd pts = boundary_sample(*r.members[i]);
            for (Index k = 0; k < pts.cols(); ++k) {
              bool inside = true;
              for (std::size_t j = 0; j < r.members.size() && inside; ++j)
                if (j != i) inside = contains(*r.members[j], Eigen::VectorXd(pts.col(k)));
              if (inside) kept.push_back(pts.col(k));
            }
          }
          Eigen::MatrixXd out(region.ambient_dim(), static_cast<Index>(kept.size()));
          for (std::size_t k = 0; k < kept.size(); ++k) out.col(static_cast<Index>(k)) = kept[k];
          return out;
        }
      },
      region.variant());
}

BoundingBox bounding_box(const RegionSpec& region) {
  return std::visit(
      [&](const auto& r) -> BoundingBox {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, EllipsoidRegion>) {
          const Eigen::VectorXd half = r.shape.inverse().diagonal().cwiseSqrt();
          return BoundingBox{r.center - half, r.center + half};
        } else if constexpr (std::is_same_v<T, BallRegion>) {
          const Eigen::VectorXd half = Eigen::VectorXd::Constant(r.center.size(), r.radius);
          return BoundingBox{r.center - half, r.center + half};
        } else if constexpr (std::is_same_v<T, MobiusImageRegion>) {
          const Eigen::MatrixXd edge = boundary_sample(region);
          if (edge.cols() == 0) {
            const Eigen::VectorXd z = Eigen::VectorXd::Zero(region.ambient_dim());
            return BoundingBox{z, z};
          }
          return box_of_columns(edge, kBoxPad);
        } else {
          BoundingBox box = bounding_box(*r.members.front());
          for (const auto& m : r.members) {
            const BoundingBox b = bounding_box(*m);
            box.lo = box.lo.cwiseMax(b.lo);
            box.hi = box.hi.cwiseMin(b.hi);
          }
          box.hi = box.hi.cwiseMax(box.lo);
          return box;
        }
      },
      region.variant());
}

RegionSpec pushforward(const RegionSpec& region, const BallMap& map) {
  return RegionSpec::mobius_image(region, map);
}

SampleBatch sample_region(const RegionSpec& region, DensityKind density, Index count,
                          std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample count must be at least 1");
  const BoundingBox box = bounding_box(region);
  const double volume = box.volume();
  const Index d = region.ambient_dim();
  const int batches = static_cast<int>(std::min<Index>(kSubBatches, count));
  const double weight_scale = volume / static_cast<double>(count);

  std::vector<Index> begin(static_cast<std::size_t>(batches) + 1);
  for (int k = 0; k <= batches; ++k) begin[static_cast<std::size_t>(k)] = k * count / batches;

  std::vector<std::vector<double>> coords(static_cast<std::size_t>(batches));
  std::vector<std::vector<double>> weights(static_cast<std::size_t>(batches));
  const std::uint64_t offset = seed * static_cast<std::uint64_t>(count) + 1;  // index 0 is the box corner

  if (volume > 0.0) {
#pragma omp parallel for schedule(static)
    for (int k = 0; k < batches; ++k) {
      const auto ks = static_cast<std::size_t>(k);
      boost::random::sobol eng(static_cast<std::size_t>(d));
      eng.seed(offset + static_cast<std::uint64_t>(begin[ks]));
      Eigen::VectorXd x(d);
      for (Index i = begin[ks]; i < begin[ks + 1]; ++i) {
        for (Index j = 0; j < d; ++j) {
          x[j] = box.lo[j] + (box.hi[j] - box.lo[j]) * (static_cast<double>(eng()) * 0x1p-64);
        }
        if (contains(region, x)) {
          coords[ks].insert(coords[ks].end(), x.data(), x.data() + d);
          weights[ks].push_back(density_value(density, region.model(), region.dim(), x) * weight_scale);
        }
      }
    }
  }

  SampleBatch out;
  out.model = region.model();
  out.dim = region.dim();
  out.seed = seed;
  out.count = count;
  Index accepted = 0;
  for (const auto& w : weights) accepted += static_cast<Index>(w.size());
  if (accepted == 0 || static_cast<double>(accepted) < 1e-4 * static_cast<double>(count)) {
    throw SamplingError("degenerate region: accepted " + std::to_string(accepted) + " of " +
                        std::to_string(count) + " samples");
  }
  for (int k = 0; k < batches; ++k) {
    if (weights[static_cast<std::size_t>(k)].empty()) {
      throw SamplingError("degenerate region: sub-batch " + std::to_string(k) +
                          " accepted no samples (increase the sample count)");
    }
  }
  out.points.resize(d, accepted);
  out.weights.resize(accepted);
  out.sub_batch_begin.assign(1, 0);
  std::vector<double> batch_mass;
  Index col = 0;
  for (int k = 0; k < batches; ++k) {
    const auto ks = static_cast<std::size_t>(k);
    double mass = 0.0;
    for (std::size_t i = 0; i < weights[ks].size(); ++i, ++col) {
      out.points.col(col) = Eigen::Map<const Eigen::VectorXd>(coords[ks].data() + i * d, d);
      out.weights[col] = weights[ks][i];
      mass += weights[ks][i];
    }
    out.sub_batch_begin.push_back(col);
    const Index n_k = begin[ks + 1] - begin[ks];
    batch_mass.push_back(mass * static_cast<double>(count) / static_cast<double>(n_k));
  }
  out.total_mass_estimate = out.weights.sum();
  if (batches >= 2) {
    double mean = 0.0;
    for (double m : batch_mass) mean += m;
    mean /= batches;
    double var = 0.0;
    for (double m : batch_mass) var += (m - mean) * (m - mean);
    var /= (batches - 1);
    out.standard_error = std::sqrt(var / batches);
  } else {
    out.standard_error = std::numeric_limits<double>::infinity();
  }
  return out;
}

RealMeasure SampleBatch::real_measure() const {
  if (model != Model::poincare) throw std::invalid_argument("sample batch is not real-model");
  return RealMeasure(points, weights);
}

ComplexMeasure SampleBatch::complex_measure() const {
  if (model != Model::bergman) throw std::invalid_argument("sample batch is not complex-model");
  Eigen::MatrixXcd z(dim, points.cols());
  for (Index i = 0; i < points.cols(); ++i) z.col(i) = to_complex(points.col(i));
  return ComplexMeasure(std::move(z), weights);
}

RealMeasure SampleBatch::real_sub_measure(int k) const {
  if (model != Model::poincare) throw std::invalid_argument("sample batch is not real-model");
  const Index b = sub_batch_begin.at(static_cast<std::size_t>(k));
  const Index e = sub_batch_begin.at(static_cast<std::size_t>(k) + 1);
  return RealMeasure(points.middleCols(b, e - b), weights.segment(b, e - b) * sub_batches());
}

ComplexMeasure SampleBatch::complex_sub_measure(int k) const {
  if (model != Model::bergman) throw std::invalid_argument("sample batch is not complex-model");
  const Index b = sub_batch_begin.at(static_cast<std::size_t>(k));
  const Index e = sub_batch_begin.at(static_cast<std::size_t>(k) + 1);
  Eigen::MatrixXcd z(dim, e - b);
  for (Index i = b; i < e; ++i) z.col(i - b) = to_complex(points.col(i));
  return ComplexMeasure(std::move(z), weights.segment(b, e - b) * sub_batches());
}

}  // namespace cbary
