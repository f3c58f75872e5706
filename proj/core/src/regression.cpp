/*
 * Copyright 2026 The dkr authors
 *
 * Licensed under the Apache License, Version 2.0. See the LICENSE file in
 * the project root for license information.
 */

#include "dkr/regression.hpp"

#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace dkr {

namespace {

void check_fit_args(const Dataset& data, double lambda) {
  if (data.n() == 0) throw std::invalid_argument("empty sample");
  if (data.xs.size() != data.ys.size())
    throw std::invalid_argument("xs and ys must have equal length");
  if (!(lambda > 0.0))
    throw std::invalid_argument("regularization must be positive");
}

Eigen::MatrixXd system_matrix(const Eigen::MatrixXd& k, double lambda) {
  const double shift = lambda * static_cast<double>(k.rows());
  Eigen::MatrixXd a = k;
  a.diagonal().array() += shift;
  return a;
}

Eigen::VectorXd to_vec(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

}  // namespace

std::string variant_name(Variant v) {
  return v == Variant::KRR ? "krr" : "bckrr";
}

Variant variant_from_name(const std::string& name) {
  if (name == "krr") return Variant::KRR;
  if (name == "bckrr") return Variant::BCKRR;
  throw std::invalid_argument("unknown method: " + name);
}

SpdSolver::SpdSolver(Eigen::MatrixXd a) {
  const double scale = std::max(a.trace() / static_cast<double>(a.rows()),
                                std::numeric_limits<double>::min());
  llt_.compute(a);
  double jitter = 1e-12 * scale;
  while (llt_.info() != Eigen::Success && jitter <= 1e-6 * scale) {
    Eigen::MatrixXd shifted = a;
    shifted.diagonal().array() += jitter;
    llt_.compute(shifted);
    if (llt_.info() == Eigen::Success) {
      jitter_ = jitter;
      return;
    }
    jitter *= 10.0;
  }
  if (llt_.info() != Eigen::Success)
    throw std::runtime_error("not positive definite");
}

Eigen::VectorXd SpdSolver::solve(const Eigen::VectorXd& b) const {
  return llt_.solve(b);
}

Eigen::MatrixXd SpdSolver::solve(const Eigen::MatrixXd& b) const {
  return llt_.solve(b);
}

Eigen::VectorXd SpdSolver::inverse_diagonal() const {
  const Eigen::Index n = llt_.matrixLLT().rows();
  // Columns of L^{-1}; (A^{-1})_ii = || L^{-1} e_i ||^2.
  Eigen::MatrixXd linv = Eigen::MatrixXd::Identity(n, n);
  llt_.matrixL().solveInPlace(linv);
  return linv.colwise().squaredNorm().transpose();
}

Eigen::VectorXd solve_spd(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  return SpdSolver(a).solve(b);
}

TrainedModel fit_krr(const Dataset& data, const Kernel& kernel, double lambda) {
  check_fit_args(data, lambda);
  Eigen::MatrixXd k = gram(kernel, data.xs);
  SpdSolver solver(system_matrix(k, lambda));
  Eigen::VectorXd c = solver.solve(to_vec(data.ys));
  return TrainedModel{data.xs, std::move(c), kernel, lambda, Variant::KRR};
}

TrainedModel fit_bckrr(const Dataset& data, const Kernel& kernel,
                       double lambda) {
  return fit_bckrr_recentered(data, kernel, lambda);
}

TrainedModel fit_bckrr_twostep(const Dataset& data, const Kernel& kernel,
                               double lambda) {
  check_fit_args(data, lambda);
  Eigen::MatrixXd k = gram(kernel, data.xs);
  SpdSolver solver(system_matrix(k, lambda));
  Eigen::VectorXd y = to_vec(data.ys);
  Eigen::VectorXd c = solver.solve(y);
  // Fit the in-sample residuals with the same kernel and lambda, then
  // stack the two coefficient vectors.
  Eigen::VectorXd r = y - k * c;
  Eigen::VectorXd d = solver.solve(r);
  Eigen::VectorXd corrected = c + d;
  return TrainedModel{data.xs, std::move(corrected), kernel, lambda,
                      Variant::BCKRR};
}

TrainedModel fit_bckrr_recentered(const Dataset& data, const Kernel& kernel,
                                  double lambda) {
  check_fit_args(data, lambda);
  Eigen::MatrixXd k = gram(kernel, data.xs);
  SpdSolver solver(system_matrix(k, lambda));
  Eigen::VectorXd y = to_vec(data.ys);
  Eigen::VectorXd c = solver.solve(y);
  // Minimizer of (1/N) sum (y_i - f(x_i))^2 + lambda ||f - f_ridge||_K^2
  // in coefficient form.
  const double shift = lambda * static_cast<double>(data.n());
  Eigen::VectorXd rhs = y + shift * c;
  Eigen::VectorXd corrected = solver.solve(rhs);
  return TrainedModel{data.xs, std::move(corrected), kernel, lambda,
                      Variant::BCKRR};
}

TrainedModel fit_bckrr_closedform(const Dataset& data, const Kernel& kernel,
                                  double lambda) {
  check_fit_args(data, lambda);
  Eigen::MatrixXd k = gram(kernel, data.xs);
  SpdSolver solver(system_matrix(k, lambda));
  Eigen::VectorXd c = solver.solve(to_vec(data.ys));
  const double shift = lambda * static_cast<double>(data.n());
  Eigen::VectorXd corrected = c + shift * solver.solve(c);
  return TrainedModel{data.xs, std::move(corrected), kernel, lambda,
                      Variant::BCKRR};
}

TrainedModel fit(const Dataset& data, const Kernel& kernel, double lambda,
                 Variant variant) {
  return variant == Variant::KRR ? fit_krr(data, kernel, lambda)
                                 : fit_bckrr(data, kernel, lambda);
}

std::vector<double> predict(const TrainedModel& model,
                            const std::vector<double>& ts) {
  Eigen::VectorXd out = cross_gram(model.kernel, model.support, ts) *
                        model.coeffs;
  return {out.data(), out.data() + out.size()};
}

Eigen::VectorXd loo_residuals(const Dataset& data, const Kernel& kernel,
                              double lambda) {
  check_fit_args(data, lambda);
  if (data.n() < 2)
    throw std::invalid_argument("leave-one-out needs at least two points");
  Eigen::MatrixXd k = gram(kernel, data.xs);
  SpdSolver solver(system_matrix(k, lambda));
  Eigen::VectorXd c = solver.solve(to_vec(data.ys));
  Eigen::VectorXd ainv_diag = solver.inverse_diagonal();
  // H = K (lambda N I + K)^{-1} = I - lambda N A^{-1}, so
  // 1 - H_ii = lambda N (A^{-1})_ii and e = lambda N c. The ratio
  // e_i / (1 - H_ii) reduces to c_i / (A^{-1})_ii.
  const double shift = lambda * static_cast<double>(data.n());
  Eigen::VectorXd out(c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (!(shift * ainv_diag[i] > 0.0))
      throw std::runtime_error("degenerate hat matrix");
    out[i] = c[i] / ainv_diag[i];
  }
  return out;
}

std::string model_to_json(const TrainedModel& model) {
  if (model.kernel.kind() == KernelKind::Custom)
    throw std::invalid_argument("custom kernels cannot be serialized");
  nlohmann::json j;
  j["kernel"] = model.kernel.name();
  j["lambda"] = model.lambda;
  j["variant"] = variant_name(model.variant);
  j["support"] = model.support;
  j["coeffs"] = std::vector<double>(model.coeffs.data(),
                                    model.coeffs.data() + model.coeffs.size());
  return j.dump(2);
}

TrainedModel model_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  auto support = j.at("support").get<std::vector<double>>();
  auto coeffs = j.at("coeffs").get<std::vector<double>>();
  if (support.size() != coeffs.size())
    throw std::invalid_argument("support/coeffs length mismatch");
  return TrainedModel{std::move(support),
                      Eigen::Map<const Eigen::VectorXd>(
                          coeffs.data(), static_cast<Eigen::Index>(coeffs.size())),
                      Kernel::from_name(j.at("kernel").get<std::string>()),
                      j.at("lambda").get<double>(),
                      variant_from_name(j.at("variant").get<std::string>())};
}

void save_model(const TrainedModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << model_to_json(model) << '\n';
}

TrainedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return model_from_json(text);
}

}  // namespace dkr
