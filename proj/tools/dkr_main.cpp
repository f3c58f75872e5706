/*
 * Copyright 2026 The dkr authors
 *
 * Licensed under the Apache License, Version 2.0. See the LICENSE file in
 * the project root for license information.
 */

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "dkr/distributed.hpp"
#include "dkr/harness.hpp"
#include "dkr/kernels.hpp"
#include "dkr/regression.hpp"
#include "dkr/synthetic.hpp"
#include "dkr/tuning.hpp"

namespace {

dkr::Dataset load_or_generate(const std::string& data_path,
                              std::size_t synthetic_n, double noise_var,
                              std::uint64_t seed) {
  if (!data_path.empty()) return dkr::load_dataset_csv(data_path);
  dkr::SyntheticSpec spec;
  spec.noise_var = noise_var;
  return dkr::generate(spec, synthetic_n, seed);
}

double training_mse(const std::vector<double>& predictions,
                    const std::vector<double>& ys) {
  double total = 0.0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    double diff = predictions[i] - ys[i];
    total += diff * diff;
  }
  return total / static_cast<double>(ys.size());
}

int cmd_fit(const std::string& data_path, std::size_t synthetic_n,
            double noise_var, std::uint64_t seed, const std::string& kernel_name,
            const std::string& method, double lambda,
            std::optional<double> alpha, std::size_t partitions,
            const std::string& model_out) {
  dkr::Dataset data = load_or_generate(data_path, synthetic_n, noise_var, seed);
  dkr::Kernel kernel = dkr::Kernel::from_name(kernel_name);
  dkr::Variant variant = dkr::variant_from_name(method);
  if (alpha)
    lambda = std::pow(static_cast<double>(data.n()), -*alpha);

  std::vector<double> in_sample;
  if (partitions <= 1) {
    dkr::TrainedModel model = dkr::fit(data, kernel, lambda, variant);
    in_sample = dkr::predict(model, data.xs);
    double max_coeff = 0.0;
    for (Eigen::Index i = 0; i < model.coeffs.size(); ++i)
      max_coeff = std::max(max_coeff, std::abs(model.coeffs[i]));
    std::cout << "kernel: " << kernel_name << "\nmethod: " << method
              << "\nN: " << data.n() << "\nlambda: " << lambda
              << "\ncoeffs: " << model.coeffs.size()
              << " entries, max |c_i| = " << max_coeff
              << "\ntraining MSE: " << training_mse(in_sample, data.ys)
              << '\n';
    if (!model_out.empty()) dkr::save_model(model, model_out);
  } else {
    dkr::PartitionPlan plan = dkr::make_partition(data, partitions, seed);
    dkr::EnsembleModel ensemble =
        dkr::fit_distributed(data, plan, kernel, lambda, variant);
    in_sample = dkr::ensemble_predict(ensemble, data.xs);
    std::cout << "kernel: " << kernel_name << "\nmethod: " << method
              << "\nN: " << data.n() << "\npartitions: " << partitions
              << "\nlambda: " << lambda
              << "\ntraining MSE: " << training_mse(in_sample, data.ys)
              << '\n';
    if (!model_out.empty())
      std::cerr << "warning: --out ignored for distributed fits\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distributed kernel regression workbench"};
  app.require_subcommand(1);

  // ---- fit ----
  std::string fit_data, fit_kernel = "sobolev", fit_method = "krr";
  std::string fit_model_out;
  std::size_t fit_n = 256, fit_partitions = 1;
  double fit_noise = 0.2, fit_lambda = 1e-3;
  std::optional<double> fit_alpha;
  std::uint64_t fit_seed = 1;
  auto* fit = app.add_subcommand("fit", "fit one model and print a summary");
  fit->add_option("--data", fit_data, "two-column x,y CSV input");
  fit->add_option("--synthetic-n", fit_n,
                  "generate a synthetic dataset of this size instead");
  fit->add_option("--noise-var", fit_noise, "synthetic noise variance");
  fit->add_option("--seed", fit_seed, "RNG seed");
  fit->add_option("--kernel", fit_kernel, "sobolev or gaussian");
  fit->add_option("--method", fit_method, "krr or bckrr");
  fit->add_option("--lambda", fit_lambda, "regularization parameter");
  auto* fit_alpha_opt = fit->add_option(
      "--alpha", fit_alpha, "use lambda = N^(-alpha) instead of --lambda");
  fit->add_option("--partitions", fit_partitions,
                  "divide-and-conquer partition count");
  fit->add_option("--out", fit_model_out, "write the model as JSON");
  (void)fit_alpha_opt;

  // ---- experiment ----
  std::string exp_config, exp_out = "results.csv", exp_plot;
  dkr::ExperimentConfig overrides;
  bool exp_no_timing = false;
  std::optional<std::size_t> exp_n, exp_reps, exp_grid_points;
  std::optional<double> exp_alpha, exp_noise;
  std::optional<std::uint64_t> exp_seed;
  std::optional<unsigned> exp_threads;
  std::vector<std::size_t> exp_m_grid;
  std::vector<std::string> exp_kernels, exp_methods;
  std::string exp_policy;
  auto* exp = app.add_subcommand("experiment",
                                 "run an experiment grid and write CSV");
  exp->add_option("--config", exp_config, "key = value config file");
  exp->add_option("--n", exp_n, "sample size N");
  exp->add_option("--m-grid", exp_m_grid, "partition counts")->delimiter(',');
  exp->add_option("--kernels", exp_kernels, "kernel names")->delimiter(',');
  exp->add_option("--methods", exp_methods, "krr and/or bckrr")
      ->delimiter(',');
  exp->add_option("--lambda-policy", exp_policy, "fixed or tuned");
  exp->add_option("--alpha", exp_alpha, "fixed-policy exponent");
  exp->add_option("--repetitions", exp_reps, "repetitions per cell");
  exp->add_option("--seed", exp_seed, "base seed");
  exp->add_option("--noise-var", exp_noise, "noise variance");
  exp->add_option("--threads", exp_threads, "worker pool size (0 = auto)");
  exp->add_option("--grid-points", exp_grid_points, "MSE quadrature points");
  exp->add_option("--out", exp_out, "results CSV path");
  exp->add_option("--plot", exp_plot, "also emit a gnuplot script");
  exp->add_flag("--no-timing", exp_no_timing,
                "write 0 wall time for reproducible output");

  // ---- rates ----
  dkr::RateSweepConfig rates_config;
  std::string rates_out;
  std::optional<double> rates_r_hint;
  std::string rates_method = "krr";
  auto* rates = app.add_subcommand(
      "rates", "sweep N and estimate the log-log convergence slope");
  rates->add_option("--n-grid", rates_config.n_grid, "sample sizes")
      ->delimiter(',');
  rates->add_option("--kernel", rates_config.kernel, "kernel name");
  rates->add_option("--method", rates_method, "krr or bckrr");
  rates->add_option("--alpha", rates_config.alpha, "lambda = N^(-alpha)");
  rates->add_option("--partitions", rates_config.m, "partition count");
  rates->add_option("--repetitions", rates_config.repetitions,
                    "repetitions per N");
  rates->add_option("--seed", rates_config.seed, "base seed");
  rates->add_option("--noise-var", rates_config.noise_var, "noise variance");
  rates->add_option("--r-hint", rates_r_hint,
                    "source index r, labels the expected exponent");
  rates->add_option("--threads", rates_config.threads, "worker pool size");
  rates->add_option("--out", rates_out, "write per-cell records as CSV");

  // ---- tune ----
  std::string tune_data, tune_kernel = "sobolev", tune_out;
  std::size_t tune_n = 256, tune_global_n = 0;
  double tune_noise = 0.2;
  double tune_alpha_min = 0.1, tune_alpha_max = 1.0, tune_alpha_step = 0.05;
  std::uint64_t tune_seed = 1;
  auto* tune = app.add_subcommand("tune", "local leave-one-out CV report");
  tune->add_option("--data", tune_data, "two-column x,y CSV input");
  tune->add_option("--synthetic-n", tune_n, "synthetic subset size");
  tune->add_option("--noise-var", tune_noise, "synthetic noise variance");
  tune->add_option("--seed", tune_seed, "RNG seed");
  tune->add_option("--kernel", tune_kernel, "sobolev or gaussian");
  tune->add_option("--alpha-min", tune_alpha_min, "grid start");
  tune->add_option("--alpha-max", tune_alpha_max, "grid end");
  tune->add_option("--alpha-step", tune_alpha_step, "grid step");
  tune->add_option("--global-n", tune_global_n,
                   "underregularize to this global sample size");
  tune->add_option("--out", tune_out, "write the score table as CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(fit)) {
      return cmd_fit(fit_data, fit_n, fit_noise, fit_seed, fit_kernel,
                     fit_method, fit_lambda, fit_alpha, fit_partitions,
                     fit_model_out);
    }

    if (app.got_subcommand(exp)) {
      dkr::ExperimentConfig config =
          exp_config.empty() ? dkr::ExperimentConfig{}
                             : dkr::load_config_file(exp_config);
      if (exp_n) config.n_samples = *exp_n;
      if (!exp_m_grid.empty()) config.m_grid = exp_m_grid;
      if (!exp_kernels.empty()) config.kernels = exp_kernels;
      if (!exp_methods.empty()) {
        config.methods.clear();
        for (const std::string& m : exp_methods)
          config.methods.push_back(dkr::variant_from_name(m));
      }
      if (!exp_policy.empty())
        config.lambda_policy = exp_policy == "tuned"
                                   ? dkr::LambdaPolicy::LocallyTuned
                                   : dkr::LambdaPolicy::Fixed;
      if (exp_alpha) config.fixed_alpha = *exp_alpha;
      if (exp_reps) config.repetitions = *exp_reps;
      if (exp_seed) config.seed = *exp_seed;
      if (exp_noise) config.noise_var = *exp_noise;
      if (exp_threads) config.threads = *exp_threads;
      if (exp_grid_points) config.grid_points = *exp_grid_points;

      std::vector<dkr::ResultRecord> records = dkr::run_experiment(config);
      dkr::write_results(records, exp_out, !exp_no_timing);
      if (!exp_plot.empty()) dkr::emit_plot_script(records, exp_plot);

      std::size_t failures = 0;
      for (const dkr::ResultRecord& rec : records)
        if (!rec.ok()) {
          ++failures;
          std::cerr << "cell error (" << rec.kernel << ',' << rec.method
                    << ",m=" << rec.m << ",rep=" << rec.repetition
                    << "): " << rec.error << '\n';
        }
      std::cout << records.size() << " cells, " << failures
                << " failed, results in " << exp_out << '\n';
      return failures == 0 ? 0 : 1;
    }

    if (app.got_subcommand(rates)) {
      rates_config.method = dkr::variant_from_name(rates_method);
      rates_config.r_hint = rates_r_hint;
      dkr::RateSweepResult result = dkr::run_rate_sweep(rates_config);
      if (!rates_out.empty()) dkr::write_results(result.records, rates_out);
      std::cout << "N, mean MSE:\n";
      for (std::size_t i = 0; i < result.estimate.n_values.size(); ++i)
        std::cout << "  " << result.estimate.n_values[i] << "  "
                  << result.estimate.mean_mse[i] << '\n';
      std::cout << "log-log slope: " << result.estimate.slope << '\n';
      if (result.estimate.expected_exponent)
        std::cout << "expected exponent (r = " << *rates_r_hint
                  << "): " << *result.estimate.expected_exponent << '\n';
      return 0;
    }

    if (app.got_subcommand(tune)) {
      dkr::Dataset data =
          load_or_generate(tune_data, tune_n, tune_noise, tune_seed);
      std::vector<double> grid;
      for (double a = tune_alpha_min; a <= tune_alpha_max + 1e-12;
           a += tune_alpha_step)
        grid.push_back(a);
      dkr::Kernel kernel = dkr::Kernel::from_name(tune_kernel);
      dkr::TuningResult result = dkr::tune_local(data, kernel, grid);

      std::ostream* out = &std::cout;
      std::ofstream file;
      if (!tune_out.empty()) {
        file.open(tune_out);
        if (!file) throw std::runtime_error("cannot open " + tune_out);
        out = &file;
      }
      *out << "alpha,lambda,mean_sq_loo\n";
      for (const auto& [alpha, score] : result.cv_scores)
        *out << alpha << ','
             << std::pow(static_cast<double>(data.n()), -alpha) << ','
             << score << '\n';
      std::cout << "selected alpha: " << result.alpha_local
                << "\nlocal lambda: " << result.lambda_local << '\n';
      if (tune_global_n >= data.n()) {
        std::cout << "underregularized lambda (N = " << tune_global_n
                  << "): "
                  << dkr::underregularize(result.lambda_local, data.n(),
                                          tune_global_n)
                  << '\n';
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
