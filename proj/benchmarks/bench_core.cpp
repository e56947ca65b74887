#include "fpreg/evolve.hpp"
#include "fpreg/hamiltonian.hpp"
#include "fpreg/tomography.hpp"
#include "fpreg/table_io.hpp"

#include <benchmark/benchmark.h>

#include <Eigen/Eigenvalues>

namespace {

namespace tomo = fpreg::tomography;

void BM_BuildTerms(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(fpreg::register_terms());
}
BENCHMARK(BM_BuildTerms)->Unit(benchmark::kMillisecond);

void BM_EigenStep(benchmark::State& state) {
  const auto terms = fpreg::register_terms();
  const fpreg::RealMatrix h = 20.0 * terms.orbital + terms.interaction + 0.03 * terms.hopping;
  for (auto _ : state) {
    Eigen::SelfAdjointEigenSolver<fpreg::RealMatrix> es(h);
    benchmark::DoNotOptimize(es.eigenvalues().data());
  }
}
BENCHMARK(BM_EigenStep);

void BM_Propagate(benchmark::State& state) {
  const auto terms = fpreg::register_terms();
  const fpreg::RealMatrix base = 20.0 * terms.orbital + terms.interaction;
  const fpreg::RealMatrix p = fpreg::build_logical_isometry(*terms.basis);
  const auto h = [&](double t) -> fpreg::RealMatrix { return base + 0.03 * std::sin(t) * terms.hopping; };
  const auto steps = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fpreg::propagate(h, p.cast<fpreg::Complex>(), 0.05 * steps, 0.05));
  }
  state.SetItemsProcessed(state.iterations() * steps);
}
BENCHMARK(BM_Propagate)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_EstimatorSetup(benchmark::State& state) {
  const auto left = tomo::bundled_left_set();
  const auto right = tomo::bundled_right_set();
  for (auto _ : state) benchmark::DoNotOptimize(tomo::ShadowEstimator(left, right));
}
BENCHMARK(BM_EstimatorSetup);

void BM_SampleComplexity(benchmark::State& state) {
  const tomo::ShadowEstimator est(tomo::bundled_left_set(), tomo::bundled_right_set());
  const tomo::Choi cz = tomo::choi_of_unitary(tomo::cz_on_triplet());
  for (auto _ : state) benchmark::DoNotOptimize(tomo::sample_complexity(est, cz));
}
BENCHMARK(BM_SampleComplexity);

void BM_Tomography(benchmark::State& state) {
  const tomo::ShadowEstimator est(tomo::bundled_left_set(), tomo::bundled_right_set());
  const tomo::Choi cz = tomo::choi_of_unitary(tomo::cz_on_triplet());
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(tomo::run_tomography(est, cz, 1000, ++seed));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(1000 * est.pairs()));
}
BENCHMARK(BM_Tomography)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
