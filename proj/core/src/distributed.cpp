/*
 * Copyright 2026 The dkr authors
 *
 * Licensed under the Apache License, Version 2.0. See the LICENSE file in
 * the project root for license information.
 */

#include "dkr/distributed.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <thread>

#include "dkr/rng.hpp"

namespace dkr {

PartitionPlan make_partition(std::size_t n, std::size_t m,
                             std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("need at least one partition");
  if (m > n) throw std::invalid_argument("more partitions than samples");

  std::vector<std::size_t> indices(n);
  std::iota(indices.begin(), indices.end(), std::size_t{0});

  // Fisher-Yates with the project RNG keeps the shuffle identical across
  // platforms and standard libraries.
  SplitRng rng(seed, {0x7061727469746eULL});  // partition stream tag
  for (std::size_t i = n - 1; i > 0; --i) {
    std::size_t j = static_cast<std::size_t>(rng.below(i + 1));
    std::swap(indices[i], indices[j]);
  }

  PartitionPlan plan;
  plan.n_total = n;
  plan.assignment.resize(m);
  const std::size_t base = n / m;
  const std::size_t extra = n % m;
  std::size_t cursor = 0;
  for (std::size_t block = 0; block < m; ++block) {
    std::size_t size = base + (block < extra ? 1 : 0);
    plan.assignment[block].assign(indices.begin() + cursor,
                                  indices.begin() + cursor + size);
    cursor += size;
  }
  return plan;
}

PartitionPlan make_partition(const Dataset& data, std::size_t m,
                             std::uint64_t seed) {
  return make_partition(data.n(), m, seed);
}

namespace {

EnsembleModel fit_blocks(const Dataset& data, const PartitionPlan& plan,
                         const Kernel& kernel,
                         const std::vector<double>& lambdas, Variant variant,
                         unsigned threads) {
  if (plan.n_total != data.n())
    throw std::invalid_argument("partition plan does not match dataset size");
  const std::size_t m = plan.partitions();
  if (lambdas.size() != m)
    throw std::invalid_argument("one lambda per partition required");

  std::vector<TrainedModel> locals;
  locals.reserve(m);
  // Slots keep block order; workers may fill them in any order.
  std::vector<std::optional<TrainedModel>> slots(m);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (;;) {
      std::size_t block = next.fetch_add(1);
      if (block >= m) return;
      try {
        Dataset local;
        local.xs.reserve(plan.size_of(block));
        local.ys.reserve(plan.size_of(block));
        for (std::size_t idx : plan.assignment[block]) {
          local.xs.push_back(data.xs[idx]);
          local.ys.push_back(data.ys[idx]);
        }
        slots[block] = fit(local, kernel, lambdas[block], variant);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  unsigned pool = threads == 0 ? std::thread::hardware_concurrency() : threads;
  if (pool <= 1 || m == 1) {
    worker();
  } else {
    std::vector<std::thread> workers;
    for (unsigned t = 0; t < std::min<std::size_t>(pool, m); ++t)
      workers.emplace_back(worker);
    for (auto& w : workers) w.join();
  }
  if (failure) std::rethrow_exception(failure);

  EnsembleModel ensemble;
  for (std::size_t block = 0; block < m; ++block) {
    ensemble.locals.push_back(std::move(*slots[block]));
    ensemble.weights.push_back(static_cast<double>(plan.size_of(block)) /
                               static_cast<double>(data.n()));
  }
  return ensemble;
}

}  // namespace

EnsembleModel fit_distributed(const Dataset& data, const PartitionPlan& plan,
                              const Kernel& kernel, double lambda,
                              Variant variant, unsigned threads) {
  return fit_blocks(data, plan, kernel,
                    std::vector<double>(plan.partitions(), lambda), variant,
                    threads);
}

EnsembleModel fit_distributed(const Dataset& data, const PartitionPlan& plan,
                              const Kernel& kernel,
                              const std::vector<double>& lambdas,
                              Variant variant, unsigned threads) {
  return fit_blocks(data, plan, kernel, lambdas, variant, threads);
}

std::vector<double> ensemble_predict(const EnsembleModel& ensemble,
                                     const std::vector<double>& ts) {
  std::vector<double> out(ts.size(), 0.0);
  for (std::size_t block = 0; block < ensemble.locals.size(); ++block) {
    std::vector<double> local = predict(ensemble.locals[block], ts);
    const double w = ensemble.weights[block];
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * local[i];
  }
  return out;
}

}  // namespace dkr
