#include "cbary/measure.hpp"
#include "cbary/parallel.hpp"
#include "cbary/potential.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>
#include <omp.h>

using namespace cbary;
using namespace cbary::testing;

namespace {

// Enough atoms to span several reduction chunks, with a ragged tail.
constexpr Index kAtoms = 5 * kChunkSize + 123;

class ThreadCount {
 public:
  explicit ThreadCount(int n) : saved_(omp_get_max_threads()) { omp_set_num_threads(n); }
  ~ThreadCount() { omp_set_num_threads(saved_); }

 private:
  int saved_;
};

}  // namespace

TEST(ChunkedReduce, SerialAndParallelCoverTheRange) {
  for (Index n : {Index{0}, Index{1}, kChunkSize - 1, kChunkSize, 3 * kChunkSize + 7}) {
    for (Exec e : {Exec::serial, Exec::parallel}) {
      const Index count = chunked_reduce<Index>(
          n, [] { return Index{0}; }, [](Index& acc, Index b, Index end) { acc += end - b; }, e);
      EXPECT_EQ(count, n);
    }
  }
}

TEST(Kernels, BitIdenticalAcrossThreadCounts) {
  std::mt19937_64 rng(91);
  const RealMeasure mu = random_real_measure(rng, 3, kAtoms);
  const ComplexMeasure nu = random_complex_measure(rng, 2, kAtoms);
  const RealPoint x = random_real_point(rng, 3, 0.7);
  const ComplexPoint z = random_complex_point(rng, 2, 0.7);

  struct Snapshot {
    double g, l;
    Eigen::VectorXd gg, gl, rc;
    Eigen::VectorXcd rh;
    Eigen::MatrixXd jc, jh;
  };
  std::vector<Snapshot> snaps;
  for (int threads : {1, 2, 4}) {
    ThreadCount tc(threads);
    snaps.push_back({potential_conformal(x, mu), potential_holomorphic(z, nu), grad_conformal(x, mu),
                     grad_holomorphic(z, nu), residual_conformal(x, mu), residual_holomorphic(z, nu),
                     linearize_conformal(x, mu).jacobian, linearize_holomorphic(z, nu).jacobian});
  }
  for (std::size_t k = 1; k < snaps.size(); ++k) {
    EXPECT_EQ(snaps[k].g, snaps[0].g);
    EXPECT_EQ(snaps[k].l, snaps[0].l);
    EXPECT_EQ(snaps[k].gg, snaps[0].gg);
    EXPECT_EQ(snaps[k].gl, snaps[0].gl);
    EXPECT_EQ(snaps[k].rc, snaps[0].rc);
    EXPECT_EQ(snaps[k].rh, snaps[0].rh);
    EXPECT_EQ(snaps[k].jc, snaps[0].jc);
    EXPECT_EQ(snaps[k].jh, snaps[0].jh);
  }
}

TEST(Kernels, SerialReferenceAgrees) {
  std::mt19937_64 rng(92);
  const RealMeasure mu = random_real_measure(rng, 4, kAtoms);
  const ComplexMeasure nu = random_complex_measure(rng, 2, kAtoms);
  const RealPoint x = random_real_point(rng, 4, 0.7);
  const ComplexPoint z = random_complex_point(rng, 2, 0.7);
  EXPECT_LE(relative_error(potential_conformal(x, mu, Exec::serial), potential_conformal(x, mu)), 1e-13);
  EXPECT_LE(relative_error(potential_holomorphic(z, nu, Exec::serial), potential_holomorphic(z, nu)), 1e-13);
  const auto close = [](const auto& a, const auto& b) { return (a - b).norm() <= 1e-12 * (1 + b.norm()); };
  EXPECT_TRUE(close(grad_conformal(x, mu, Exec::serial), grad_conformal(x, mu)));
  EXPECT_TRUE(close(grad_holomorphic(z, nu, Exec::serial), grad_holomorphic(z, nu)));
  EXPECT_TRUE(close(residual_conformal(x, mu, Exec::serial), residual_conformal(x, mu)));
  EXPECT_TRUE(close(residual_holomorphic(z, nu, Exec::serial), residual_holomorphic(z, nu)));
  EXPECT_TRUE(close(linearize_conformal(x, mu, Exec::serial).jacobian, linearize_conformal(x, mu).jacobian));
  EXPECT_TRUE(close(linearize_holomorphic(z, nu, Exec::serial).jacobian, linearize_holomorphic(z, nu).jacobian));
}

TEST(Kernels, SmallMeasuresMatchSerialExactly) {
  // A single chunk reduces in the same order either way.
  std::mt19937_64 rng(93);
  const RealMeasure mu = random_real_measure(rng, 3, 100);
  const RealPoint x = random_real_point(rng, 3);
  EXPECT_EQ(potential_conformal(x, mu, Exec::serial), potential_conformal(x, mu, Exec::parallel));
  EXPECT_EQ(residual_conformal(x, mu, Exec::serial), residual_conformal(x, mu, Exec::parallel));
}

TEST(Sampling, BitIdenticalAcrossThreadCounts) {
  const RegionSpec d1 =
      pushforward(RegionSpec::ellipsoid(Model::poincare, 2, Eigen::Vector2d::Zero(), Eigen::Vector2d(4, 9).asDiagonal()),
                  RealMobius::involution(real2(0.5, 0)));
  std::vector<SampleBatch> batches;
  for (int threads : {1, 2, 4}) {
    ThreadCount tc(threads);
    batches.push_back(sample_region(d1, DensityKind::hyperbolic, 40000, 3));
  }
  for (std::size_t k = 1; k < batches.size(); ++k) {
    EXPECT_EQ(batches[k].points, batches[0].points);
    EXPECT_EQ(batches[k].weights, batches[0].weights);
    EXPECT_EQ(batches[k].total_mass_estimate, batches[0].total_mass_estimate);
    EXPECT_EQ(batches[k].standard_error, batches[0].standard_error);
  }
}
