// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include <Eigen/LU>

#include "rriqa/color.hpp"
#include "rriqa/kernels.hpp"
#include "rriqa/mggd.hpp"

using namespace rriqa;

namespace {

const MggdParams& params() {
  static const MggdParams p = [] {
    Mat3 d;
    d << 2.0, 0.3, 0.1, 0.3, 1.0, -0.2, 0.1, -0.2, 0.5;
    return MggdParams::from_dispersion(0.4, d);
  }();
  return p;
}

std::vector<double> rows(std::size_t n) {
  const SubbandVectors s = sample(params(), n, 11);
  return {s.packed().begin(), s.packed().end()};
}

Execution exec_of(const benchmark::State& state) {
  return state.range(1) == 0 ? Execution::serial : Execution::parallel;
}

void BM_ShapeMoments(benchmark::State& state) {
  const auto data = rows(static_cast<std::size_t>(state.range(0)));
  const Mat3 inv = params().sigma.inverse();
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::shape_moments(exec_of(state), data, inv, 0.4));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_LogMoments(benchmark::State& state) {
  const auto data = rows(static_cast<std::size_t>(state.range(0)));
  std::vector<double> log_u(data.size() / 3);
  kernels::log_quadratic_forms(Execution::serial, data, params().sigma.inverse(), log_u);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::log_moments(exec_of(state), log_u, 0.4, 0.0));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_DensityGaps(benchmark::State& state) {
  const auto data = rows(static_cast<std::size_t>(state.range(0)));
  const MggdParams& p = params();
  MggdParams q = p;
  q.beta = 0.7;
  const kernels::DensityTerms tp{p.dispersion().inverse(), p.beta, log_normalizer(p)};
  const kernels::DensityTerms tq{q.dispersion().inverse(), q.beta, log_normalizer(q)};
  std::vector<double> out(data.size() / 3);
  for (auto _ : state) {
    kernels::log_density_gaps(exec_of(state), data, tp, tq, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Estimate(benchmark::State& state) {
  const SubbandVectors s = sample(params(), static_cast<std::size_t>(state.range(0)), 5);
  EstimateOptions opt;
  opt.execution = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_mggd(s, opt));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Cielab(benchmark::State& state) {
  const int edge = static_cast<int>(state.range(0));
  ColorImage img(edge, edge);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (Plane& p : img.planes) {
    for (double& v : p.values()) v = u(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(rgb_to_cielab(img, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * edge * edge);
}

void row_sizes(benchmark::internal::Benchmark* b) {
  for (long n : {4096L, 65536L, 1L << 20}) {
    for (long e : {0L, 1L}) b->Args({n, e});
  }
  b->ArgNames({"rows", "parallel"});
}

}  // namespace

BENCHMARK(BM_ShapeMoments)->Apply(row_sizes);
BENCHMARK(BM_LogMoments)->Apply(row_sizes);
BENCHMARK(BM_DensityGaps)->Apply(row_sizes);
BENCHMARK(BM_Estimate)->Args({65536, 0})->Args({65536, 1})->ArgNames({"rows", "parallel"})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Cielab)->Args({256, 0})->Args({256, 1})->Args({1024, 0})->Args({1024, 1})
    ->ArgNames({"edge", "parallel"});

BENCHMARK_MAIN();
