/*
 * Copyright 2026 The dkr authors
 *
 * Licensed under the Apache License, Version 2.0. See the LICENSE file in
 * the project root for license information.
 */

#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "dkr/distributed.hpp"
#include "dkr/synthetic.hpp"

using namespace dkr;

TEST_CASE("tent target function") {
  SyntheticSpec spec;
  CHECK(target_fn(spec, 0.5) == 0.5);
  CHECK(target_fn(spec, 0.0) == 0.0);
  CHECK(target_fn(spec, 1.0) == 0.0);
  CHECK(target_fn(spec, 0.2) == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("generate") {
  SUBCASE("noise-free responses equal the target exactly") {
    SyntheticSpec spec;
    spec.noise_var = 0.0;
    Dataset data = generate(spec, 100, 5);
    for (std::size_t i = 0; i < data.n(); ++i) {
      CHECK(data.ys[i] == spec.target(data.xs[i]));
      CHECK(data.xs[i] >= 0.0);
      CHECK(data.xs[i] < 1.0);
    }
  }
  SUBCASE("fixed seed is bit identical") {
    SyntheticSpec spec;
    Dataset a = generate(spec, 50, 123);
    Dataset b = generate(spec, 50, 123);
    CHECK(a.xs == b.xs);
    CHECK(a.ys == b.ys);
    Dataset c = generate(spec, 50, 124);
    CHECK(a.ys != c.ys);
  }
  SUBCASE("sample noise variance is near 1/5 at N = 4098") {
    SyntheticSpec spec;
    int within = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      Dataset data = generate(spec, 4098, seed);
      double ss = 0.0;
      for (std::size_t i = 0; i < data.n(); ++i) {
        double eps = data.ys[i] - spec.target(data.xs[i]);
        ss += eps * eps;
      }
      double var = ss / static_cast<double>(data.n());
      if (var >= 0.17 && var <= 0.23) ++within;
    }
    CHECK(within >= 9);
  }
  SUBCASE("argument validation") {
    SyntheticSpec spec;
    CHECK_THROWS(generate(spec, 0, 1));
    spec.noise_var = -0.1;
    CHECK_THROWS(generate(spec, 10, 1));
  }
}

TEST_CASE("trapezoid grid quadrature") {
  EvalGrid grid = EvalGrid::trapezoid();
  REQUIRE(grid.points.size() == 2001);
  SUBCASE("weights sum to one") {
    double total = 0.0;
    for (double w : grid.weights) total += w;
    CHECK(std::abs(total - 1.0) <= 1e-12);
  }
  SUBCASE("points sorted in [0,1]") {
    CHECK(grid.points.front() == 0.0);
    CHECK(grid.points.back() == 1.0);
    CHECK(std::is_sorted(grid.points.begin(), grid.points.end()));
  }
  SUBCASE("matches closed-form integrals of polynomials") {
    auto integrate = [&](auto fn) {
      double total = 0.0;
      for (std::size_t i = 0; i < grid.points.size(); ++i)
        total += grid.weights[i] * fn(grid.points[i]);
      return total;
    };
    CHECK(std::abs(integrate([](double x) { return x * x; }) - 1.0 / 3.0) <=
          1e-6);
    CHECK(std::abs(integrate([](double x) { return x * x * x; }) - 0.25) <=
          1e-6);
  }
}

TEST_CASE("mse_against_target") {
  SyntheticSpec spec;
  EvalGrid grid = EvalGrid::trapezoid();
  SUBCASE("the target itself scores zero") {
    CHECK(mse_against_target([&](double x) { return spec.target(x); }, spec,
                             grid) == 0.0);
  }
  SUBCASE("zero predictor integrates the squared tent") {
    // closed form: 2 * int_0^{1/2} x^2 dx = 1/12
    double mse = mse_against_target([](double) { return 0.0; }, spec, grid);
    CHECK(std::abs(mse - 1.0 / 12.0) <= 1e-6);
  }
  SUBCASE("constant offset costs its square") {
    const double c = 0.37;
    double mse = mse_against_target(
        [&](double x) { return spec.target(x) + c; }, spec, grid);
    CHECK(mse == doctest::Approx(c * c).epsilon(1e-12));
  }
  SUBCASE("prediction-vector form agrees") {
    std::vector<double> preds(grid.points.size(), 0.0);
    CHECK(mse_of_predictions(preds, spec, grid) ==
          mse_against_target([](double) { return 0.0; }, spec, grid));
    CHECK_THROWS(mse_of_predictions({0.0}, spec, grid));
  }
}

TEST_CASE("response-weighted linearity") {
  SyntheticSpec spec;
  std::vector<double> probe;
  for (int i = 0; i <= 50; ++i) probe.push_back(i / 50.0);

  auto make_responses = [&](std::size_t n, std::uint64_t seed) {
    Dataset d = generate(spec, n, seed);
    return d;
  };

  SUBCASE("adding a zero response vector changes nothing") {
    Dataset data = make_responses(32, 1);
    std::vector<double> zero(data.n(), 0.0);
    FitPredictFn krr = [](const std::vector<double>& xs,
                          const std::vector<double>& ys,
                          const std::vector<double>& pts) {
      return predict(fit_krr({xs, ys}, Kernel::sobolev(), 0.01), pts);
    };
    CHECK(linearity_check(krr, data.xs, data.ys, zero, probe) <= 1e-10);
  }

  SUBCASE("monolithic and distributed fits are linear in y") {
    Dataset d1 = make_responses(64, 2);
    Dataset d2 = make_responses(64, 3);  // reuse xs of d1, responses of d2
    double y1_inf = 0.0, y2_inf = 0.0;
    for (double y : d1.ys) y1_inf = std::max(y1_inf, std::abs(y));
    for (double y : d2.ys) y2_inf = std::max(y2_inf, std::abs(y));
    const double tol = 1e-8 * (1.0 + y1_inf + y2_inf);

    auto mono = [&](auto fitter) {
      return FitPredictFn([fitter](const std::vector<double>& xs,
                                   const std::vector<double>& ys,
                                   const std::vector<double>& pts) {
        return predict(fitter({xs, ys}), pts);
      });
    };
    const double lambda = std::pow(64.0, -0.5);
    Kernel s = Kernel::sobolev();

    CHECK(linearity_check(mono([&](const Dataset& d) {
            return fit_krr(d, s, lambda);
          }), d1.xs, d1.ys, d2.ys, probe) <= tol);
    for (auto fitter : {&fit_bckrr_twostep, &fit_bckrr_recentered,
                        &fit_bckrr_closedform}) {
      CHECK(linearity_check(mono([&](const Dataset& d) {
              return fitter(d, s, lambda);
            }), d1.xs, d1.ys, d2.ys, probe) <= tol);
    }

    for (Variant v : {Variant::KRR, Variant::BCKRR}) {
      FitPredictFn dist = [&](const std::vector<double>& xs,
                              const std::vector<double>& ys,
                              const std::vector<double>& pts) {
        Dataset d{xs, ys};
        PartitionPlan plan = make_partition(d, 4, 77);
        return ensemble_predict(fit_distributed(d, plan, s, lambda, v), pts);
      };
      CHECK(linearity_check(dist, d1.xs, d1.ys, d2.ys, probe) <= tol);
    }
  }

  SUBCASE("scaling the responses scales the prediction") {
    Dataset data = make_responses(48, 4);
    const double scale = 3.25;
    Kernel s = Kernel::gaussian();
    TrainedModel base = fit_krr(data, s, 0.01);
    Dataset scaled = data;
    for (double& y : scaled.ys) y *= scale;
    TrainedModel big = fit_krr(scaled, s, 0.01);
    std::vector<double> pb = predict(base, probe);
    std::vector<double> pl = predict(big, probe);
    for (std::size_t i = 0; i < probe.size(); ++i)
      CHECK(std::abs(pl[i] - scale * pb[i]) <= 1e-8 * (1.0 + scale));
  }
}

TEST_CASE("dataset CSV round trip") {
  SyntheticSpec spec;
  Dataset data = generate(spec, 37, 9);
  auto path = std::filesystem::temp_directory_path() / "dkr_dataset_test.csv";
  save_dataset_csv(data, path.string());
  Dataset back = load_dataset_csv(path.string());
  CHECK(back.xs == data.xs);
  CHECK(back.ys == data.ys);
  std::filesystem::remove(path);
}
