/*
 * Copyright 2026 The dkr authors
 *
 * Licensed under the Apache License, Version 2.0. See the LICENSE file in
 * the project root for license information.
 */

#include "dkr/tuning.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dkr {

std::vector<double> default_alpha_grid() {
  std::vector<double> grid;
  for (int i = 2; i <= 20; ++i) grid.push_back(0.05 * i);
  return grid;
}

TuningResult tune_local(const Dataset& subset, const Kernel& kernel,
                        const std::vector<double>& alpha_grid) {
  const std::size_t n = subset.n();
  if (n < 2) throw std::invalid_argument("need at least two points to tune");
  if (alpha_grid.empty()) throw std::invalid_argument("empty alpha grid");

  TuningResult result;
  double best = std::numeric_limits<double>::infinity();
  bool any = false;
  for (double alpha : alpha_grid) {
    const double lambda = std::pow(static_cast<double>(n), -alpha);
    double score;
    try {
      Eigen::VectorXd loo = loo_residuals(subset, kernel, lambda);
      score = loo.squaredNorm() / static_cast<double>(n);
    } catch (const std::runtime_error&) {
      continue;  // degenerate hat matrix at this grid point
    }
    result.cv_scores.emplace_back(alpha, score);
    // Strict < keeps the earliest (smallest) alpha on ties.
    if (score < best) {
      best = score;
      result.alpha_local = alpha;
      result.lambda_local = lambda;
      any = true;
    }
  }
  if (!any) throw std::runtime_error("all grid points degenerate");
  return result;
}

double underregularize(double lambda_local, std::size_t n,
                       std::size_t n_total) {
  if (!(lambda_local > 0.0 && lambda_local < 1.0) || n < 2)
    throw std::invalid_argument("exponent undefined");
  if (n_total < n)
    throw std::invalid_argument("global size smaller than local size");
  const double exponent = std::log(static_cast<double>(n_total)) /
                          std::log(static_cast<double>(n));
  return std::pow(lambda_local, exponent);
}

}  // namespace dkr
