/*
 * Copyright 2026 The dkr authors
 *
 * Licensed under the Apache License, Version 2.0. See the LICENSE file in
 * the project root for license information.
 */

#ifndef DKR_TUNING_HPP
#define DKR_TUNING_HPP

#include <utility>
#include <vector>

#include "dkr/regression.hpp"

namespace dkr {

struct TuningResult {
  double alpha_local = 0.0;   // selected exponent
  double lambda_local = 0.0;  // n^(-alpha)
  double lambda_under = 0.0;  // N^(-alpha), filled by underregularize
  std::vector<std::pair<double, double>> cv_scores;  // (alpha, mean sq LOO)
};

/// Default exponent grid {0.10, 0.15, ..., 1.00}.
std::vector<double> default_alpha_grid();

/// Local cross-validation: for each alpha evaluates lambda = n^(-alpha)
/// by mean-squared exact leave-one-out residuals and selects the
/// minimizer; ties break toward the smallest alpha. A grid point whose
/// hat matrix degenerates is skipped; if all are skipped this throws.
TuningResult tune_local(const Dataset& subset, const Kernel& kernel,
                        const std::vector<double>& alpha_grid);

/// Maps a locally tuned lambda = n^(-alpha) to the global sample size:
/// lambda^(log N / log n) = N^(-alpha).
double underregularize(double lambda_local, std::size_t n, std::size_t n_total);

}  // namespace dkr

#endif  // DKR_TUNING_HPP
