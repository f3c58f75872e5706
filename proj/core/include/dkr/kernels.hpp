/*
 * Copyright 2026 The dkr authors
 *
 * Licensed under the Apache License, Version 2.0. See the LICENSE file in
 * the project root for license information.
 */

#ifndef DKR_KERNELS_HPP
#define DKR_KERNELS_HPP

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

namespace dkr {

enum class KernelKind { Sobolev, Gaussian, Custom };

/// Immutable Mercer kernel descriptor. The two built-in kernels are the
/// Sobolev min-kernel K(x,t) = 1 + min(x,t) and the Gaussian kernel
/// K(x,t) = exp(-(x-t)^2 / 0.3) with a fixed bandwidth denominator.
class Kernel {
 public:
  static Kernel sobolev();
  static Kernel gaussian();
  /// User-supplied symmetric kernel function with a sup-norm bound kappa
  /// such that kappa^2 >= K(x,x) on the domain of interest.
  static Kernel custom(std::function<double(double, double)> fn,
                       double kappa_bound, double bandwidth = 0.0);

  /// Lookup by CLI/config name: "sobolev" or "gaussian".
  static Kernel from_name(const std::string& name);

  double operator()(double x, double t) const;

  KernelKind kind() const { return kind_; }
  double bandwidth() const { return bandwidth_; }
  double kappa_bound() const { return kappa_bound_; }
  const std::string& name() const { return name_; }

 private:
  Kernel(KernelKind kind, double bandwidth, double kappa_bound,
         std::string name, std::function<double(double, double)> fn)
      : kind_(kind),
        bandwidth_(bandwidth),
        kappa_bound_(kappa_bound),
        name_(std::move(name)),
        fn_(std::move(fn)) {}

  KernelKind kind_;
  double bandwidth_;
  double kappa_bound_;
  std::string name_;
  std::function<double(double, double)> fn_;  // Custom only
};

/// Kernel matrix on xs. The upper triangle is computed once and mirrored,
/// so the result is exactly symmetric in floating point.
Eigen::MatrixXd gram(const Kernel& kernel, const std::vector<double>& xs);

/// |ts| x |xs| matrix with entry (i,j) = K(ts[i], xs[j]); used for
/// prediction at new points.
Eigen::MatrixXd cross_gram(const Kernel& kernel, const std::vector<double>& xs,
                           const std::vector<double>& ts);

}  // namespace dkr

#endif  // DKR_KERNELS_HPP
