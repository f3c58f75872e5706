/*
 * Copyright 2026 The dkr authors
 *
 * Licensed under the Apache License, Version 2.0. See the LICENSE file in
 * the project root for license information.
 */

#ifndef DKR_HARNESS_HPP
#define DKR_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dkr/distributed.hpp"
#include "dkr/synthetic.hpp"

namespace dkr {

enum class LambdaPolicy { Fixed, LocallyTuned };

/// One experiment grid. The defaults reproduce the benchmark study:
/// N = 4098, m in {2,...,1024}, sigma^2 = 1/5, 50 repetitions and
/// lambda = N^(-2/3) under the fixed policy.
struct ExperimentConfig {
  std::size_t n_samples = 4098;
  std::vector<std::size_t> m_grid = {2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};
  std::vector<std::string> kernels = {"sobolev", "gaussian"};
  std::vector<Variant> methods = {Variant::KRR, Variant::BCKRR};
  LambdaPolicy lambda_policy = LambdaPolicy::Fixed;
  double fixed_alpha = 2.0 / 3.0;  // lambda = N^(-alpha)
  std::size_t repetitions = 50;
  std::uint64_t seed = 1;
  double noise_var = 0.2;
  std::optional<double> r_hint;  // source-condition index, labels only
  unsigned threads = 0;          // worker pool; 0 = hardware concurrency
  std::size_t grid_points = 2001;
};

/// One cell of the experiment grid. A failed cell carries its message in
/// `error` and NaN in `mse`; it is never silently dropped.
struct ResultRecord {
  std::string kernel;
  std::string method;
  std::size_t n_samples = 0;
  std::size_t m = 0;
  double lambda_used = 0.0;
  std::size_t repetition = 0;
  double mse = 0.0;
  double wall_time_s = 0.0;
  std::string error;

  bool ok() const { return error.empty(); }
};

/// Runs every (kernel, method, m, repetition) cell. Cells execute on a
/// worker pool but the output order is deterministic; the data seed for
/// a repetition is shared across cells so method comparisons are paired.
std::vector<ResultRecord> run_experiment(const ExperimentConfig& config);

/// Seeds the harness derives for a cell, exposed so a run can be replayed
/// outside run_experiment.
std::uint64_t experiment_data_seed(std::uint64_t seed,
                                   std::size_t repetition);
std::uint64_t experiment_partition_seed(std::uint64_t seed,
                                        std::size_t repetition, std::size_t m);

struct RateEstimate {
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<double> n_values;
  std::vector<double> mean_mse;
  std::optional<double> expected_exponent;
};

/// Least-squares slope of log(mean MSE) against log(N). Requires at
/// least three distinct N values with positive mean MSE.
RateEstimate estimate_rate(const std::vector<ResultRecord>& records);
RateEstimate estimate_rate(const std::vector<double>& n_values,
                           const std::vector<double>& mean_mse);

/// Theoretical rate exponent for KRR given the source-condition index.
double expected_rate_exponent(double r, bool noise_free);

struct RateSweepConfig {
  std::vector<std::size_t> n_grid = {256, 512, 1024, 2048, 4096, 8192};
  std::string kernel = "sobolev";
  Variant method = Variant::KRR;
  double alpha = 0.5;  // lambda = N^(-alpha)
  std::size_t m = 1;
  std::size_t repetitions = 20;
  std::uint64_t seed = 1;
  double noise_var = 0.2;
  std::optional<double> r_hint;
  unsigned threads = 0;
  std::size_t grid_points = 2001;
};

struct RateSweepResult {
  std::vector<ResultRecord> records;
  RateEstimate estimate;
};

RateSweepResult run_rate_sweep(const RateSweepConfig& config);

/// CSV with header kernel,method,N,m,lambda,repetition,mse,wall_time_s.
/// Numbers use shortest round-trip decimal encoding with '.' decimal
/// points; rows keep the deterministic cell order. With
/// include_timing = false the wall-time column is written as 0 so output
/// is reproducible byte for byte.
void write_results(const std::vector<ResultRecord>& records, std::ostream& out,
                   bool include_timing = true);
void write_results(const std::vector<ResultRecord>& records,
                   const std::string& path, bool include_timing = true);
std::vector<ResultRecord> read_results(std::istream& in);

/// Gnuplot script plotting mean MSE against m (log-2 x axis), one curve
/// per kernel/method pair.
void emit_plot_script(const std::vector<ResultRecord>& records,
                      std::ostream& out);
void emit_plot_script(const std::vector<ResultRecord>& records,
                      const std::string& path);

/// Line-oriented `key = value` config file; '#' starts a comment.
ExperimentConfig load_config_file(const std::string& path);
ExperimentConfig parse_config(std::istream& in);

}  // namespace dkr

#endif  // DKR_HARNESS_HPP
