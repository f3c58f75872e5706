/*
 * Copyright 2026 The dkr authors
 *
 * Licensed under the Apache License, Version 2.0. See the LICENSE file in
 * the project root for license information.
 */

#ifndef DKR_DISTRIBUTED_HPP
#define DKR_DISTRIBUTED_HPP

#include <cstdint>
#include <vector>

#include "dkr/regression.hpp"

namespace dkr {

/// Disjoint cover of {0..N-1} into m blocks whose sizes differ by at
/// most one.
struct PartitionPlan {
  std::vector<std::vector<std::size_t>> assignment;
  std::size_t n_total = 0;

  std::size_t partitions() const { return assignment.size(); }
  std::size_t size_of(std::size_t block) const {
    return assignment[block].size();
  }
};

/// Seeded uniform shuffle of the indices split into m contiguous blocks;
/// the first (N mod m) blocks get the extra index.
PartitionPlan make_partition(std::size_t n, std::size_t m, std::uint64_t seed);
PartitionPlan make_partition(const Dataset& data, std::size_t m,
                             std::uint64_t seed);

/// Weighted average of independently fitted local models; weights are
/// n_l / N and sum to one.
struct EnsembleModel {
  std::vector<TrainedModel> locals;
  std::vector<double> weights;
};

/// Fits the base algorithm on each block with a shared lambda. Local fits
/// run on up to `threads` workers (0 = hardware concurrency); the result
/// is ordered by block index regardless of completion order.
EnsembleModel fit_distributed(const Dataset& data, const PartitionPlan& plan,
                              const Kernel& kernel, double lambda,
                              Variant variant, unsigned threads = 0);

/// Same, with one lambda per block (locally tuned regularization).
EnsembleModel fit_distributed(const Dataset& data, const PartitionPlan& plan,
                              const Kernel& kernel,
                              const std::vector<double>& lambdas,
                              Variant variant, unsigned threads = 0);

/// Pointwise weighted sum of local predictions, accumulated in ascending
/// block order for bit-reproducibility.
std::vector<double> ensemble_predict(const EnsembleModel& ensemble,
                                     const std::vector<double>& ts);

}  // namespace dkr

#endif  // DKR_DISTRIBUTED_HPP
