/*
 * Copyright 2026 The dkr authors
 *
 * Licensed under the Apache License, Version 2.0. See the LICENSE file in
 * the project root for license information.
 */

#include "dkr/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace dkr {

namespace {

double sobolev_eval(double x, double t) { return 1.0 + std::min(x, t); }

}  // namespace

Kernel Kernel::sobolev() {
  // kappa = sup sqrt(K(x,x)) = sqrt(2) on [0,1]
  return Kernel(KernelKind::Sobolev, 0.0, std::sqrt(2.0), "sobolev", {});
}

Kernel Kernel::gaussian() {
  return Kernel(KernelKind::Gaussian, 0.3, 1.0, "gaussian", {});
}

Kernel Kernel::custom(std::function<double(double, double)> fn,
                      double kappa_bound, double bandwidth) {
  if (!fn) throw std::invalid_argument("custom kernel requires a function");
  if (kappa_bound < 0.0)
    throw std::invalid_argument("kappa bound must be nonnegative");
  return Kernel(KernelKind::Custom, bandwidth, kappa_bound, "custom",
                std::move(fn));
}

Kernel Kernel::from_name(const std::string& name) {
  if (name == "sobolev") return sobolev();
  if (name == "gaussian") return gaussian();
  throw std::invalid_argument("unknown kernel: " + name);
}

double Kernel::operator()(double x, double t) const {
  switch (kind_) {
    case KernelKind::Sobolev:
      return sobolev_eval(x, t);
    case KernelKind::Gaussian: {
      double d = x - t;
      return std::exp(-d * d / bandwidth_);
    }
    case KernelKind::Custom:
      return fn_(x, t);
  }
  throw std::logic_error("unreachable kernel kind");
}

Eigen::MatrixXd gram(const Kernel& kernel, const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("empty sample");
  const Eigen::Index n = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      double v = kernel(xs[i], xs[j]);
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

Eigen::MatrixXd cross_gram(const Kernel& kernel, const std::vector<double>& xs,
                           const std::vector<double>& ts) {
  if (xs.empty() || ts.empty()) throw std::invalid_argument("empty sample");
  Eigen::MatrixXd out(static_cast<Eigen::Index>(ts.size()),
                      static_cast<Eigen::Index>(xs.size()));
  for (Eigen::Index i = 0; i < out.rows(); ++i)
    for (Eigen::Index j = 0; j < out.cols(); ++j)
      out(i, j) = kernel(ts[i], xs[j]);
  return out;
}

}  // namespace dkr
