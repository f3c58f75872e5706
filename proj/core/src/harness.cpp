/*
 * Copyright 2026 The dkr authors
 *
 * Licensed under the Apache License, Version 2.0. See the LICENSE file in
 * the project root for license information.
 */

#include "dkr/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "dkr/rng.hpp"
#include "dkr/tuning.hpp"
#include "text_util.hpp"

namespace dkr {

namespace {

constexpr std::uint64_t kDataTag = 0x64736574ULL;
constexpr std::uint64_t kPartTag = 0x706c616eULL;

std::uint64_t derive_seed(std::uint64_t seed,
                          std::initializer_list<std::uint64_t> keys) {
  return SplitRng(seed, keys).next_u64();
}

}  // namespace

std::uint64_t experiment_data_seed(std::uint64_t seed,
                                   std::size_t repetition) {
  return derive_seed(seed, {kDataTag, repetition});
}

std::uint64_t experiment_partition_seed(std::uint64_t seed,
                                        std::size_t repetition,
                                        std::size_t m) {
  return derive_seed(seed, {kPartTag, repetition, m});
}

namespace {

struct Cell {
  std::size_t kernel_idx;
  std::size_t method_idx;
  std::size_t m;
  std::size_t repetition;
};

ResultRecord run_cell(const ExperimentConfig& config, const Cell& cell,
                      const Kernel& kernel, const SyntheticSpec& spec,
                      const EvalGrid& grid) {
  ResultRecord rec;
  rec.kernel = config.kernels[cell.kernel_idx];
  rec.method = variant_name(config.methods[cell.method_idx]);
  rec.n_samples = config.n_samples;
  rec.m = cell.m;
  rec.repetition = cell.repetition;
  rec.mse = std::numeric_limits<double>::quiet_NaN();

  const auto start = std::chrono::steady_clock::now();
  try {
    // The data stream is keyed by repetition only, so every cell of a
    // repetition sees the same sample and method comparisons are paired.
    Dataset data =
        generate(spec, config.n_samples,
                 experiment_data_seed(config.seed, cell.repetition));
    PartitionPlan plan = make_partition(
        data, cell.m,
        experiment_partition_seed(config.seed, cell.repetition, cell.m));

    std::vector<double> lambdas(cell.m);
    if (config.lambda_policy == LambdaPolicy::Fixed) {
      const double lambda =
          std::pow(static_cast<double>(config.n_samples), -config.fixed_alpha);
      std::fill(lambdas.begin(), lambdas.end(), lambda);
    } else {
      const std::vector<double> alpha_grid = default_alpha_grid();
      for (std::size_t block = 0; block < cell.m; ++block) {
        Dataset local;
        for (std::size_t idx : plan.assignment[block]) {
          local.xs.push_back(data.xs[idx]);
          local.ys.push_back(data.ys[idx]);
        }
        TuningResult tuned = tune_local(local, kernel, alpha_grid);
        lambdas[block] =
            underregularize(tuned.lambda_local, local.n(), config.n_samples);
      }
    }
    double lambda_sum = 0.0;
    for (double l : lambdas) lambda_sum += l;
    rec.lambda_used = lambda_sum / static_cast<double>(cell.m);

    // Local fits run sequentially; parallelism lives at the cell level.
    EnsembleModel ensemble =
        fit_distributed(data, plan, kernel, lambdas,
                        config.methods[cell.method_idx], /*threads=*/1);
    rec.mse = mse_of_predictions(ensemble_predict(ensemble, grid.points),
                                 spec, grid);
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  rec.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return rec;
}

}  // namespace

std::vector<ResultRecord> run_experiment(const ExperimentConfig& config) {
  if (config.repetitions < 1)
    throw std::invalid_argument("need at least one repetition");
  for (std::size_t m : config.m_grid)
    if (m > config.n_samples)
      throw std::invalid_argument("more partitions than samples");

  std::vector<Kernel> kernels;
  for (const std::string& name : config.kernels)
    kernels.push_back(Kernel::from_name(name));

  SyntheticSpec spec;
  spec.noise_var = config.noise_var;
  const EvalGrid grid = EvalGrid::trapezoid(config.grid_points);

  // Cell order fixes the output order: (kernel, method, m, repetition).
  std::vector<Cell> cells;
  for (std::size_t ki = 0; ki < config.kernels.size(); ++ki)
    for (std::size_t mi = 0; mi < config.methods.size(); ++mi)
      for (std::size_t m : config.m_grid)
        for (std::size_t rep = 0; rep < config.repetitions; ++rep)
          cells.push_back({ki, mi, m, rep});

  std::vector<ResultRecord> results(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      results[i] = run_cell(config, cells[i], kernels[cells[i].kernel_idx],
                            spec, grid);
    }
  };

  unsigned pool =
      config.threads == 0 ? std::thread::hardware_concurrency() : config.threads;
  if (pool <= 1 || cells.size() == 1) {
    worker();
  } else {
    std::vector<std::thread> workers;
    for (unsigned t = 0; t < std::min<std::size_t>(pool, cells.size()); ++t)
      workers.emplace_back(worker);
    for (auto& w : workers) w.join();
  }
  return results;
}

RateEstimate estimate_rate(const std::vector<double>& n_values,
                           const std::vector<double>& mean_mse) {
  if (n_values.size() != mean_mse.size())
    throw std::invalid_argument("length mismatch");
  if (n_values.size() < 3)
    throw std::invalid_argument("need at least three sample sizes");

  RateEstimate est;
  est.n_values = n_values;
  est.mean_mse = mean_mse;

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double count = static_cast<double>(n_values.size());
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (!(mean_mse[i] > 0.0)) throw std::invalid_argument("cannot take log");
    double lx = std::log(n_values[i]);
    double ly = std::log(mean_mse[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  est.slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  est.intercept = (sy - est.slope * sx) / count;
  return est;
}

RateEstimate estimate_rate(const std::vector<ResultRecord>& records) {
  std::map<std::size_t, std::pair<double, std::size_t>> by_n;
  for (const ResultRecord& rec : records) {
    if (!rec.ok()) continue;
    auto& [total, count] = by_n[rec.n_samples];
    total += rec.mse;
    ++count;
  }
  std::vector<double> ns, means;
  for (const auto& [n, agg] : by_n) {
    ns.push_back(static_cast<double>(n));
    means.push_back(agg.first / static_cast<double>(agg.second));
  }
  return estimate_rate(ns, means);
}

double expected_rate_exponent(double r, bool noise_free) {
  if (!(r > 0.0)) throw std::invalid_argument("source index must be positive");
  if (!noise_free) return -std::min(2.0 * r / (1.0 + 2.0 * r), 2.0 / 3.0);
  if (r <= 0.5) return -2.0 * r;
  if (r <= 1.0) return -(1.5 * r + 0.25);
  if (r <= 1.5) return -(0.5 * r + 1.25);
  return -2.0;
}

RateSweepResult run_rate_sweep(const RateSweepConfig& config) {
  RateSweepResult result;
  for (std::size_t n : config.n_grid) {
    ExperimentConfig cell;
    cell.n_samples = n;
    cell.m_grid = {config.m};
    cell.kernels = {config.kernel};
    cell.methods = {config.method};
    cell.lambda_policy = LambdaPolicy::Fixed;
    cell.fixed_alpha = config.alpha;
    cell.repetitions = config.repetitions;
    cell.seed = config.seed;
    cell.noise_var = config.noise_var;
    cell.threads = config.threads;
    cell.grid_points = config.grid_points;
    std::vector<ResultRecord> records = run_experiment(cell);
    result.records.insert(result.records.end(), records.begin(),
                          records.end());
  }
  result.estimate = estimate_rate(result.records);
  if (config.r_hint)
    result.estimate.expected_exponent =
        expected_rate_exponent(*config.r_hint, config.noise_var == 0.0);
  return result;
}

void write_results(const std::vector<ResultRecord>& records, std::ostream& out,
                   bool include_timing) {
  out << "kernel,method,N,m,lambda,repetition,mse,wall_time_s\n";
  for (const ResultRecord& rec : records) {
    out << rec.kernel << ',' << rec.method << ',' << rec.n_samples << ','
        << rec.m << ',' << detail::format_double(rec.lambda_used) << ','
        << rec.repetition << ',' << detail::format_double(rec.mse) << ','
        << detail::format_double(include_timing ? rec.wall_time_s : 0.0)
        << '\n';
  }
}

void write_results(const std::vector<ResultRecord>& records,
                   const std::string& path, bool include_timing) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_results(records, out, include_timing);
}

std::vector<ResultRecord> read_results(std::istream& in) {
  std::vector<ResultRecord> records;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 8)
      throw std::runtime_error("malformed results row: " + line);
    ResultRecord rec;
    rec.kernel = fields[0];
    rec.method = fields[1];
    rec.n_samples = std::stoull(fields[2]);
    rec.m = std::stoull(fields[3]);
    rec.lambda_used = detail::parse_double(fields[4]);
    rec.repetition = std::stoull(fields[5]);
    rec.mse = fields[6] == "nan" ? std::numeric_limits<double>::quiet_NaN()
                                 : detail::parse_double(fields[6]);
    if (std::isnan(rec.mse)) rec.error = "error row";
    rec.wall_time_s = detail::parse_double(fields[7]);
    records.push_back(std::move(rec));
  }
  return records;
}

void emit_plot_script(const std::vector<ResultRecord>& records,
                      std::ostream& out) {
  // mean MSE per (kernel, method, m), combos in first-appearance order
  std::vector<std::pair<std::string, std::string>> combos;
  std::map<std::pair<std::string, std::string>,
           std::map<std::size_t, std::pair<double, std::size_t>>>
      series;
  for (const ResultRecord& rec : records) {
    if (!rec.ok()) continue;
    auto key = std::make_pair(rec.kernel, rec.method);
    if (series.find(key) == series.end()) combos.push_back(key);
    auto& [total, count] = series[key][rec.m];
    total += rec.mse;
    ++count;
  }

  out << "set logscale x 2\n"
      << "set xlabel 'number of partitions m'\n"
      << "set ylabel 'mean MSE'\n"
      << "set key top left\n";
  for (std::size_t i = 0; i < combos.size(); ++i) {
    out << "$data" << i << " << EOD\n";
    for (const auto& [m, agg] : series[combos[i]])
      out << m << ' '
          << detail::format_double(agg.first /
                                   static_cast<double>(agg.second))
          << '\n';
    out << "EOD\n";
  }
  if (combos.empty()) {
    out << "# no data\n";
    return;
  }
  out << "plot ";
  for (std::size_t i = 0; i < combos.size(); ++i) {
    if (i > 0) out << ", ";
    out << "$data" << i << " using 1:2 with linespoints title '"
        << combos[i].first << ' ' << combos[i].second << "'";
  }
  out << '\n';
}

void emit_plot_script(const std::vector<ResultRecord>& records,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  emit_plot_script(records, out);
}

namespace {

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r");
  auto end = s.find_last_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));

    if (key == "N") {
      config.n_samples = std::stoull(value);
    } else if (key == "m_grid") {
      config.m_grid.clear();
      for (const std::string& item : split_list(value))
        config.m_grid.push_back(std::stoull(item));
    } else if (key == "kernels") {
      config.kernels = split_list(value);
    } else if (key == "methods") {
      config.methods.clear();
      for (const std::string& item : split_list(value))
        config.methods.push_back(variant_from_name(item));
    } else if (key == "lambda_policy") {
      if (value == "fixed")
        config.lambda_policy = LambdaPolicy::Fixed;
      else if (value == "tuned")
        config.lambda_policy = LambdaPolicy::LocallyTuned;
      else
        throw std::runtime_error("unknown lambda_policy: " + value);
    } else if (key == "fixed_alpha") {
      config.fixed_alpha = detail::parse_double(value);
    } else if (key == "repetitions") {
      config.repetitions = std::stoull(value);
    } else if (key == "seed") {
      config.seed = std::stoull(value);
    } else if (key == "noise_var") {
      config.noise_var = detail::parse_double(value);
    } else if (key == "r_hint") {
      config.r_hint = detail::parse_double(value);
    } else if (key == "threads") {
      config.threads = static_cast<unsigned>(std::stoul(value));
    } else if (key == "grid_points") {
      config.grid_points = std::stoull(value);
    } else {
      throw std::runtime_error("unknown config key: " + key);
    }
  }
  return config;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_config(in);
}

}  // namespace dkr
