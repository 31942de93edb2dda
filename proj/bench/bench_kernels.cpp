// Serial reference loops against the chunked OpenMP kernels.

#include "cbary/measure.hpp"
#include "cbary/potential.hpp"
#include "cbary/solver.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace cbary;

namespace {

RealMeasure real_cloud(Index n, Index atoms) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  Eigen::MatrixXd p(n, atoms);
  for (Index i = 0; i < atoms; ++i) {
    Eigen::VectorXd v(n);
    for (Index k = 0; k < n; ++k) v[k] = g(rng);
    p.col(i) = 0.8 * std::tanh(v.norm()) * v.normalized();
  }
  return RealMeasure(p, Eigen::VectorXd::Ones(atoms));
}

ComplexMeasure complex_cloud(Index m, Index atoms) {
  const RealMeasure r = real_cloud(2 * m, atoms);
  Eigen::MatrixXcd p(m, atoms);
  for (Index i = 0; i < atoms; ++i) p.col(i) = to_complex(r.points().col(i));
  return ComplexMeasure(p, r.weights());
}

template <Exec E>
void BM_PotentialConformal(benchmark::State& state) {
  const RealMeasure mu = real_cloud(3, state.range(0));
  const RealPoint x(Eigen::Vector3d(0.1, -0.2, 0.3));
  for (auto _ : state) benchmark::DoNotOptimize(potential_conformal(x, mu, E));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <Exec E>
void BM_ResidualConformal(benchmark::State& state) {
  const RealMeasure mu = real_cloud(3, state.range(0));
  const RealPoint x(Eigen::Vector3d(0.1, -0.2, 0.3));
  for (auto _ : state) benchmark::DoNotOptimize(residual_conformal(x, mu, E));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <Exec E>
void BM_LinearizeHolomorphic(benchmark::State& state) {
  const ComplexMeasure mu = complex_cloud(2, state.range(0));
  const ComplexPoint z(Eigen::Vector2cd(cdouble(0.1, 0.2), cdouble(-0.3, 0.1)));
  for (auto _ : state) benchmark::DoNotOptimize(linearize_holomorphic(z, mu, E));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SampleImageEllipse(benchmark::State& state) {
  const RegionSpec d =
      RegionSpec::ellipsoid(Model::poincare, 2, Eigen::Vector2d::Zero(), Eigen::Vector2d(4, 9).asDiagonal());
  const RegionSpec d1 = pushforward(d, RealMobius::involution(RealPoint(Eigen::Vector2d(0.5, 0))));
  for (auto _ : state) benchmark::DoNotOptimize(sample_region(d1, DensityKind::hyperbolic, state.range(0), 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_RegionBarycenter(benchmark::State& state) {
  const RegionSpec d =
      RegionSpec::ellipsoid(Model::poincare, 2, Eigen::Vector2d::Zero(), Eigen::Vector2d(4, 9).asDiagonal());
  const RegionSpec d1 = pushforward(d, RealMobius::involution(RealPoint(Eigen::Vector2d(0.5, 0))));
  for (auto _ : state) benchmark::DoNotOptimize(barycenter_region(d1, DensityKind::lebesgue, {}, state.range(0), 1));
}

}  // namespace

BENCHMARK(BM_PotentialConformal<Exec::serial>)->RangeMultiplier(16)->Range(1 << 10, 1 << 20);
BENCHMARK(BM_PotentialConformal<Exec::parallel>)->RangeMultiplier(16)->Range(1 << 10, 1 << 20);
BENCHMARK(BM_ResidualConformal<Exec::serial>)->RangeMultiplier(16)->Range(1 << 10, 1 << 20);
BENCHMARK(BM_ResidualConformal<Exec::parallel>)->RangeMultiplier(16)->Range(1 << 10, 1 << 20);
BENCHMARK(BM_LinearizeHolomorphic<Exec::serial>)->RangeMultiplier(16)->Range(1 << 10, 1 << 20);
BENCHMARK(BM_LinearizeHolomorphic<Exec::parallel>)->RangeMultiplier(16)->Range(1 << 10, 1 << 20);
BENCHMARK(BM_SampleImageEllipse)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RegionBarycenter)->Arg(1 << 18)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
