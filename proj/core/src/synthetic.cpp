/*
 * Copyright 2026 The dkr authors
 *
 * Licensed under the Apache License, Version 2.0. See the LICENSE file in
 * the project root for license information.
 */

#include "dkr/synthetic.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dkr/rng.hpp"
#include "text_util.hpp"

namespace dkr {

double target_fn(const SyntheticSpec& spec, double x) {
  return spec.target(x);
}

Dataset generate(const SyntheticSpec& spec, std::size_t n,
                 std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("need at least one sample");
  if (spec.noise_var < 0.0)
    throw std::invalid_argument("noise variance must be nonnegative");
  Dataset data;
  data.xs.reserve(n);
  data.ys.reserve(n);
  SplitRng rng(seed, {0x64617461ULL});  // data stream tag
  const double sigma = std::sqrt(spec.noise_var);
  for (std::size_t i = 0; i < n; ++i) {
    double x = rng.uniform();
    double y = spec.target(x);
    if (sigma > 0.0) y += sigma * rng.gaussian();
    data.xs.push_back(x);
    data.ys.push_back(y);
  }
  return data;
}

EvalGrid EvalGrid::trapezoid(std::size_t n_points) {
  if (n_points < 2) throw std::invalid_argument("grid needs two points");
  EvalGrid grid;
  grid.points.reserve(n_points);
  grid.weights.reserve(n_points);
  const double h = 1.0 / static_cast<double>(n_points - 1);
  for (std::size_t i = 0; i < n_points; ++i) {
    grid.points.push_back(static_cast<double>(i) * h);
    bool endpoint = (i == 0 || i + 1 == n_points);
    grid.weights.push_back(endpoint ? h / 2.0 : h);
  }
  return grid;
}

double mse_against_target(const std::function<double(double)>& predictor,
                          const SyntheticSpec& spec, const EvalGrid& grid) {
  double total = 0.0;
  for (std::size_t i = 0; i < grid.points.size(); ++i) {
    double diff = predictor(grid.points[i]) - spec.target(grid.points[i]);
    total += grid.weights[i] * diff * diff;
  }
  return total;
}

double mse_of_predictions(const std::vector<double>& predictions,
                          const SyntheticSpec& spec, const EvalGrid& grid) {
  if (predictions.size() != grid.points.size())
    throw std::invalid_argument("prediction/grid length mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < grid.points.size(); ++i) {
    double diff = predictions[i] - spec.target(grid.points[i]);
    total += grid.weights[i] * diff * diff;
  }
  return total;
}

double linearity_check(const FitPredictFn& fit_predict,
                       const std::vector<double>& xs,
                       const std::vector<double>& y1,
                       const std::vector<double>& y2,
                       const std::vector<double>& probe) {
  if (y1.size() != xs.size() || y2.size() != xs.size())
    throw std::invalid_argument("response length mismatch");
  std::vector<double> sum(y1.size());
  for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = y1[i] + y2[i];

  std::vector<double> p_sum = fit_predict(xs, sum, probe);
  std::vector<double> p1 = fit_predict(xs, y1, probe);
  std::vector<double> p2 = fit_predict(xs, y2, probe);

  double worst = 0.0;
  for (std::size_t i = 0; i < probe.size(); ++i)
    worst = std::max(worst, std::abs(p_sum[i] - p1[i] - p2[i]));
  return worst;
}

void save_dataset_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "x,y\n";
  for (std::size_t i = 0; i < data.n(); ++i)
    out << detail::format_double(data.xs[i]) << ','
        << detail::format_double(data.ys[i]) << '\n';
}

Dataset load_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Dataset data;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first && line.rfind("x,", 0) == 0) {
      first = false;
      continue;  // header
    }
    first = false;
    auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("malformed CSV line: " + line);
    data.xs.push_back(detail::parse_double(
        std::string_view(line).substr(0, comma)));
    data.ys.push_back(detail::parse_double(
        std::string_view(line).substr(comma + 1)));
  }
  if (data.n() == 0) throw std::runtime_error("empty dataset file");
  return data;
}

}  // namespace dkr
