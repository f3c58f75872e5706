/*
 * Copyright 2026 The dkr authors
 *
 * Licensed under the Apache License, Version 2.0. See the LICENSE file in
 * the project root for license information.
 */

#include <benchmark/benchmark.h>

#include <cmath>

#include "dkr/distributed.hpp"
#include "dkr/regression.hpp"
#include "dkr/synthetic.hpp"

namespace {

dkr::Dataset bench_data(std::size_t n) {
  dkr::SyntheticSpec spec;
  return dkr::generate(spec, n, 42);
}

void BM_Gram(benchmark::State& state) {
  dkr::Dataset data = bench_data(static_cast<std::size_t>(state.range(0)));
  dkr::Kernel kernel = dkr::Kernel::sobolev();
  for (auto _ : state)
    benchmark::DoNotOptimize(dkr::gram(kernel, data.xs));
}
BENCHMARK(BM_Gram)->Range(64, 2048);

void BM_FitKrr(benchmark::State& state) {
  dkr::Dataset data = bench_data(static_cast<std::size_t>(state.range(0)));
  dkr::Kernel kernel = dkr::Kernel::sobolev();
  const double lambda =
      std::pow(static_cast<double>(data.n()), -2.0 / 3.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(dkr::fit_krr(data, kernel, lambda));
}
BENCHMARK(BM_FitKrr)->Range(64, 2048);

void BM_FitBckrr(benchmark::State& state) {
  dkr::Dataset data = bench_data(static_cast<std::size_t>(state.range(0)));
  dkr::Kernel kernel = dkr::Kernel::sobolev();
  const double lambda =
      std::pow(static_cast<double>(data.n()), -2.0 / 3.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(dkr::fit_bckrr(data, kernel, lambda));
}
BENCHMARK(BM_FitBckrr)->Range(64, 2048);

void BM_FitDistributed(benchmark::State& state) {
  dkr::Dataset data = bench_data(4096);
  dkr::Kernel kernel = dkr::Kernel::sobolev();
  const double lambda = std::pow(4096.0, -2.0 / 3.0);
  const std::size_t m = static_cast<std::size_t>(state.range(0));
  dkr::PartitionPlan plan = dkr::make_partition(data, m, 7);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        dkr::fit_distributed(data, plan, kernel, lambda, dkr::Variant::KRR));
  state.SetLabel("m=" + std::to_string(m));
}
BENCHMARK(BM_FitDistributed)->RangeMultiplier(4)->Range(1, 256);

void BM_LooResiduals(benchmark::State& state) {
  dkr::Dataset data = bench_data(static_cast<std::size_t>(state.range(0)));
  dkr::Kernel kernel = dkr::Kernel::sobolev();
  for (auto _ : state)
    benchmark::DoNotOptimize(dkr::loo_residuals(data, kernel, 1e-3));
}
BENCHMARK(BM_LooResiduals)->Range(64, 1024);

}  // namespace

BENCHMARK_MAIN();
