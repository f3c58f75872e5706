/*
 * Copyright 2026 The dkr authors
 *
 * Licensed under the Apache License, Version 2.0. See the LICENSE file in
 * the project root for license information.
 */

#ifndef DKR_REGRESSION_HPP
#define DKR_REGRESSION_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "dkr/kernels.hpp"

namespace dkr {

struct Dataset {
  std::vector<double> xs;
  std::vector<double> ys;

  std::size_t n() const { return xs.size(); }
};

enum class Variant { KRR, BCKRR };

std::string variant_name(Variant v);
Variant variant_from_name(const std::string& name);

/// Fitted regressor f(x) = sum_i coeffs[i] * K(support[i], x).
struct TrainedModel {
  std::vector<double> support;
  Eigen::VectorXd coeffs;
  Kernel kernel;
  double lambda;
  Variant variant;
};

/// Cholesky factorization of a symmetric matrix with escalating diagonal
/// jitter: on failure adds 1e-12 * trace/n to the diagonal and escalates
/// by x10 up to 1e-6 * trace/n before giving up. Reusable for multiple
/// right-hand sides.
class SpdSolver {
 public:
  explicit SpdSolver(Eigen::MatrixXd a);

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const;

  /// Diagonal of the inverse, via the factorization.
  Eigen::VectorXd inverse_diagonal() const;

  double applied_jitter() const { return jitter_; }

 private:
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double jitter_ = 0.0;
};

/// One-shot SPD solve; x satisfies ||Ax-b||_inf <= 1e-8 * (1+||b||_inf)
/// for well-conditioned inputs.
Eigen::VectorXd solve_spd(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

TrainedModel fit_krr(const Dataset& data, const Kernel& kernel, double lambda);

/// Canonical bias-corrected fit (recentered formulation, one extra solve
/// on the shared factorization).
TrainedModel fit_bckrr(const Dataset& data, const Kernel& kernel,
                       double lambda);

// The three provably equivalent bias-corrected formulations. fit_bckrr
// forwards to the recentered one; the others are kept as cross-checks.
TrainedModel fit_bckrr_twostep(const Dataset& data, const Kernel& kernel,
                               double lambda);
TrainedModel fit_bckrr_recentered(const Dataset& data, const Kernel& kernel,
                                  double lambda);
TrainedModel fit_bckrr_closedform(const Dataset& data, const Kernel& kernel,
                                  double lambda);

TrainedModel fit(const Dataset& data, const Kernel& kernel, double lambda,
                 Variant variant);

std::vector<double> predict(const TrainedModel& model,
                            const std::vector<double>& ts);

/// Exact leave-one-out residuals of KRR via the hat-matrix shortcut
/// e_i / (1 - H_ii); each entry equals the residual at x_i of the model
/// refit without point i, where the refit keeps the total ridge weight
/// lambda*N fixed.
Eigen::VectorXd loo_residuals(const Dataset& data, const Kernel& kernel,
                              double lambda);

/// JSON model persistence. Coefficients survive a round trip bit-exactly
/// (shortest round-trip decimal encoding). Custom kernels cannot be
/// serialized.
std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const std::string& text);
void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

}  // namespace dkr

#endif  // DKR_REGRESSION_HPP
