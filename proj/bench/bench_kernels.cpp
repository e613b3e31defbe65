// Serial reference path versus the OpenMP path for the main kernels. Both
// produce bit-identical results; only wall time differs.

#include <cmath>
#include <numbers>
#include <vector>

#include <benchmark/benchmark.h>

#include "mixvol/gaussian_mc.hpp"
#include "mixvol/mixed_discriminant.hpp"
#include "mixvol/zero_counting.hpp"

namespace {

using namespace mixvol;

Execution mode(const benchmark::State& state) { return state.range(0) == 0 ? Execution::serial : Execution::parallel; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

void BM_ExpectedGramVolume(benchmark::State& state) {
  const int d = static_cast<int>(state.range(1));
  const MatrixEnsemble ensemble(std::vector<GaussianVectorSpec>(d, GaussianVectorSpec{make_spd(Matrix::Identity(d, d))}));
  McConfig cfg;
  cfg.samples = 1u << 18;
  cfg.execution = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(expected_gram_volume(ensemble, cfg).mean);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.samples));
  label(state);
}
BENCHMARK(BM_ExpectedGramVolume)->ArgsProduct({{0, 1}, {2, 5, 10}})->Unit(benchmark::kMillisecond);

void BM_MixedDiscriminant(benchmark::State& state) {
  const int d = static_cast<int>(state.range(1));
  std::vector<Matrix> tuple;
  for (int i = 0; i < d; ++i) tuple.push_back(Matrix::Identity(d, d) * (1.0 + 0.1 * i));
  for (auto _ : state) benchmark::DoNotOptimize(mixed_discriminant(tuple, mode(state)));
  label(state);
}
BENCHMARK(BM_MixedDiscriminant)->ArgsProduct({{0, 1}, {8, 12, 16}})->Unit(benchmark::kMillisecond);

FieldSpec circular_field(int components) {
  KernelSpec k;
  for (int j = 0; j < 64; ++j) {
    const double th = 2 * std::numbers::pi * j / 64;
    KernelAtom a;
    a.weight = 1.0 / 64;
    a.frequency = Vector(2);
    a.frequency << std::cos(th), std::sin(th);
    k.atoms.push_back(a);
  }
  FieldSpec f;
  f.dim = 2;
  f.components.assign(components, k);
  return f;
}

void BM_EmpiricalZeros(benchmark::State& state) {
  const auto components = static_cast<int>(state.range(1));
  const FieldSpec f = circular_field(components);
  Region box;
  box.lower = Vector::Zero(2);
  box.upper = Vector::Constant(2, 10.0);
  EmpiricalConfig cfg;
  cfg.realizations = 32;
  cfg.grid = components == 2 ? 256 : 512;
  cfg.execution = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(sample_zero_measures(f, box, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.realizations));
  state.SetLabel(std::string(state.range(0) == 0 ? "serial" : "parallel") + (components == 2 ? " points" : " length"));
}
BENCHMARK(BM_EmpiricalZeros)->ArgsProduct({{0, 1}, {1, 2}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
