/*
 * Copyright 2026 The dkr authors
 *
 * Licensed under the Apache License, Version 2.0. See the LICENSE file in
 * the project root for license information.
 */

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <vector>

#include "dkr/regression.hpp"
#include "dkr/rng.hpp"

using namespace dkr;

namespace {

Dataset random_dataset(std::size_t n, std::uint64_t seed) {
  SplitRng rng(seed);
  Dataset data;
  for (std::size_t i = 0; i < n; ++i) {
    data.xs.push_back(rng.uniform());
    data.ys.push_back(2.0 * rng.uniform() - 1.0);
  }
  return data;
}

double rel_inf_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / (1.0 + a.cwiseAbs().maxCoeff());
}

// Regularized empirical objective in coefficient form:
// (1/N)||y - Kc||^2 + lambda c'Kc.
double krr_objective(const Eigen::MatrixXd& k, const Eigen::VectorXd& y,
                     double lambda, const Eigen::VectorXd& c) {
  Eigen::VectorXd fitted = k * c;
  return (y - fitted).squaredNorm() / static_cast<double>(y.size()) +
         lambda * c.dot(fitted);
}

// Same with the penalty recentered at the plain ridge coefficients.
double recentered_objective(const Eigen::MatrixXd& k, const Eigen::VectorXd& y,
                            double lambda, const Eigen::VectorXd& center,
                            const Eigen::VectorXd& c) {
  Eigen::VectorXd delta = c - center;
  return (y - k * c).squaredNorm() / static_cast<double>(y.size()) +
         lambda * delta.dot(k * delta);
}

}  // namespace

TEST_CASE("solve_spd") {
  SUBCASE("identity") {
    Eigen::VectorXd b(3);
    b << 1.0, -2.0, 3.0;
    Eigen::VectorXd x = solve_spd(Eigen::MatrixXd::Identity(3, 3), b);
    CHECK((x - b).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("diagonal") {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
    a(0, 0) = 2.0;
    a(1, 1) = 4.0;
    Eigen::VectorXd b(2);
    b << 2.0, 8.0;
    Eigen::VectorXd x = solve_spd(a, b);
    CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(x[1] == doctest::Approx(2.0).epsilon(1e-14));
  }
  SUBCASE("random SPD residual") {
    SplitRng rng(5);
    Eigen::MatrixXd m(20, 20);
    for (Eigen::Index i = 0; i < 20; ++i)
      for (Eigen::Index j = 0; j < 20; ++j) m(i, j) = rng.uniform() - 0.5;
    Eigen::MatrixXd a = m * m.transpose() +
                        0.1 * Eigen::MatrixXd::Identity(20, 20);
    Eigen::VectorXd b(20);
    for (Eigen::Index i = 0; i < 20; ++i) b[i] = rng.uniform();
    Eigen::VectorXd x = solve_spd(a, b);
    CHECK((a * x - b).cwiseAbs().maxCoeff() <=
          1e-8 * (1.0 + b.cwiseAbs().maxCoeff()));
  }
  SUBCASE("indefinite matrix fails") {
    Eigen::MatrixXd a(2, 2);
    a << 1.0, 0.0, 0.0, -5.0;
    Eigen::VectorXd b = Eigen::VectorXd::Ones(2);
    CHECK_THROWS_WITH(solve_spd(a, b), "not positive definite");
  }
  SUBCASE("jitter rescues a singular PSD matrix") {
    // Rank-one PSD: duplicate-point gram pattern.
    Eigen::MatrixXd a = Eigen::MatrixXd::Ones(2, 2);
    Eigen::VectorXd b = Eigen::VectorXd::Ones(2);
    SpdSolver solver(a);
    CHECK(solver.applied_jitter() > 0.0);
  }
}

TEST_CASE("fit_krr") {
  Kernel s = Kernel::sobolev();
  SUBCASE("one-point system solved by hand") {
    Dataset data{{0.0}, {2.0}};
    TrainedModel model = fit_krr(data, s, 1.0);
    // (lambda*N + K(0,0)) c = y -> 2c = 2
    CHECK(model.coeffs[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(predict(model, {0.0})[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(model.variant == Variant::KRR);
  }
  SUBCASE("huge lambda crushes the coefficients") {
    Dataset data = random_dataset(30, 17);
    const double lambda = 1e9;
    TrainedModel model = fit_krr(data, s, lambda);
    double y_inf = 0.0;
    for (double y : data.ys) y_inf = std::max(y_inf, std::abs(y));
    CHECK(model.coeffs.cwiseAbs().maxCoeff() <=
          y_inf / (lambda * static_cast<double>(data.n())));
    for (double p : predict(model, {0.1, 0.5, 0.9}))
      CHECK(std::abs(p) < 1e-8);
  }
  SUBCASE("zero responses give zero coefficients") {
    Dataset data = random_dataset(20, 3);
    std::fill(data.ys.begin(), data.ys.end(), 0.0);
    TrainedModel model = fit_krr(data, s, 0.01);
    CHECK(model.coeffs.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("linear-system residual invariant") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      Dataset data = random_dataset(60, seed);
      const double lambda = 1e-3;
      TrainedModel model = fit_krr(data, s, lambda);
      Eigen::MatrixXd k = gram(s, data.xs);
      Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(
          data.ys.data(), static_cast<Eigen::Index>(data.n()));
      Eigen::MatrixXd a = k;
      a.diagonal().array() += lambda * static_cast<double>(data.n());
      CHECK((a * model.coeffs - y).cwiseAbs().maxCoeff() <=
            1e-8 * (1.0 + y.cwiseAbs().maxCoeff()));
    }
  }
  SUBCASE("invalid arguments") {
    Dataset data{{0.1}, {1.0}};
    CHECK_THROWS_WITH(fit_krr(data, s, 0.0), "regularization must be positive");
    CHECK_THROWS_WITH(fit_krr(data, s, -1.0),
                      "regularization must be positive");
    CHECK_THROWS(fit_krr(Dataset{}, s, 0.1));
  }
}

TEST_CASE("predict") {
  Kernel s = Kernel::sobolev();
  SUBCASE("zero coefficients") {
    Dataset data = random_dataset(10, 9);
    std::fill(data.ys.begin(), data.ys.end(), 0.0);
    TrainedModel model = fit_krr(data, s, 0.5);
    for (double p : predict(model, {0.0, 0.3, 1.0})) CHECK(p == 0.0);
  }
  SUBCASE("single support point") {
    TrainedModel model{{0.0}, Eigen::VectorXd::Ones(1), s, 1.0, Variant::KRR};
    CHECK(predict(model, {0.5})[0] == 1.0);  // K_S(0, 0.5) = 1
  }
  SUBCASE("in-sample predictions satisfy Kc = y - lambda N c") {
    Dataset data = random_dataset(40, 21);
    const double lambda = 0.05;
    TrainedModel model = fit_krr(data, s, lambda);
    std::vector<double> preds = predict(model, data.xs);
    for (std::size_t i = 0; i < data.n(); ++i) {
      double expected = data.ys[i] -
                        lambda * static_cast<double>(data.n()) *
                            model.coeffs[static_cast<Eigen::Index>(i)];
      CHECK(preds[i] == doctest::Approx(expected).epsilon(1e-9));
    }
  }
}

TEST_CASE("bias-corrected fits") {
  Kernel s = Kernel::sobolev();
  SUBCASE("zero responses") {
    Dataset data = random_dataset(15, 2);
    std::fill(data.ys.begin(), data.ys.end(), 0.0);
    CHECK(fit_bckrr_twostep(data, s, 0.1).coeffs.cwiseAbs().maxCoeff() == 0.0);
    CHECK(fit_bckrr_recentered(data, s, 0.1).coeffs.cwiseAbs().maxCoeff() ==
          0.0);
    CHECK(fit_bckrr_closedform(data, s, 0.1).coeffs.cwiseAbs().maxCoeff() ==
          0.0);
  }
  SUBCASE("one-point system solved by hand") {
    Dataset data{{0.0}, {2.0}};
    // c = 1, residual r = 2 - 1 = 1, d solves 2d = 1, corrected = 1.5
    CHECK(fit_bckrr_twostep(data, s, 1.0).coeffs[0] ==
          doctest::Approx(1.5).epsilon(1e-12));
    CHECK(fit_bckrr_recentered(data, s, 1.0).coeffs[0] ==
          doctest::Approx(1.5).epsilon(1e-12));
    CHECK(fit_bckrr_closedform(data, s, 1.0).coeffs[0] ==
          doctest::Approx(1.5).epsilon(1e-12));
    CHECK(fit_bckrr(data, s, 1.0).variant == Variant::BCKRR);
  }
  SUBCASE("three formulations agree on random instances") {
    SplitRng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
      std::size_t n = 5 + static_cast<std::size_t>(rng.below(196));
      Dataset data = random_dataset(n, 100 + trial);
      Kernel k = (trial % 2 == 0) ? Kernel::sobolev() : Kernel::gaussian();
      double lambda = std::pow(static_cast<double>(n), -0.5);
      Eigen::VectorXd a = fit_bckrr_twostep(data, k, lambda).coeffs;
      Eigen::VectorXd b = fit_bckrr_recentered(data, k, lambda).coeffs;
      Eigen::VectorXd c = fit_bckrr_closedform(data, k, lambda).coeffs;
      CHECK(rel_inf_diff(a, b) <= 1e-8);
      CHECK(rel_inf_diff(a, c) <= 1e-8);
    }
  }
}

TEST_CASE("objective optimality") {
  Kernel s = Kernel::sobolev();
  Dataset data = random_dataset(30, 41);
  const double lambda = 0.02;
  Eigen::MatrixXd k = gram(s, data.xs);
  Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(
      data.ys.data(), static_cast<Eigen::Index>(data.n()));

  TrainedModel ridge = fit_krr(data, s, lambda);
  TrainedModel corrected = fit_bckrr_recentered(data, s, lambda);
  double j_ridge = krr_objective(k, y, lambda, ridge.coeffs);
  double j_corrected =
      recentered_objective(k, y, lambda, ridge.coeffs, corrected.coeffs);

  SplitRng rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd delta(k.rows());
    for (Eigen::Index i = 0; i < delta.size(); ++i)
      delta[i] = 0.2 * (rng.uniform() - 0.5);
    CHECK(j_ridge <=
          krr_objective(k, y, lambda, ridge.coeffs + delta) + 1e-12);
    CHECK(j_corrected <= recentered_objective(k, y, lambda, ridge.coeffs,
                                              corrected.coeffs + delta) +
                             1e-12);
  }
}

TEST_CASE("leave-one-out residuals match brute-force refits") {
  // The refit keeps the total ridge weight lambda*N, so the reduced
  // system uses lambda*N/(N-1).
  auto brute_force = [](const Dataset& data, const Kernel& k, double lambda) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(data.n()));
    const double reduced = lambda * static_cast<double>(data.n()) /
                           static_cast<double>(data.n() - 1);
    for (std::size_t i = 0; i < data.n(); ++i) {
      Dataset rest;
      for (std::size_t j = 0; j < data.n(); ++j) {
        if (j == i) continue;
        rest.xs.push_back(data.xs[j]);
        rest.ys.push_back(data.ys[j]);
      }
      TrainedModel model = fit_krr(rest, k, reduced);
      out[static_cast<Eigen::Index>(i)] =
          data.ys[i] - predict(model, {data.xs[i]})[0];
    }
    return out;
  };

  SUBCASE("two points") {
    Dataset data{{0.2, 0.8}, {1.0, -0.5}};
    for (Kernel k : {Kernel::sobolev(), Kernel::gaussian()}) {
      Eigen::VectorXd fast = loo_residuals(data, k, 0.3);
      Eigen::VectorXd slow = brute_force(data, k, 0.3);
      CHECK((fast - slow).cwiseAbs().maxCoeff() <= 1e-8);
    }
  }
  SUBCASE("ten random points") {
    Dataset data = random_dataset(10, 55);
    Eigen::VectorXd fast = loo_residuals(data, Kernel::sobolev(), 0.05);
    Eigen::VectorXd slow = brute_force(data, Kernel::sobolev(), 0.05);
    CHECK((fast - slow).cwiseAbs().maxCoeff() <= 1e-8);
  }
  SUBCASE("zero responses give zero residuals") {
    Dataset data = random_dataset(8, 56);
    std::fill(data.ys.begin(), data.ys.end(), 0.0);
    CHECK(loo_residuals(data, Kernel::sobolev(), 0.1).cwiseAbs().maxCoeff() ==
          0.0);
  }
  SUBCASE("needs two points") {
    Dataset data{{0.5}, {1.0}};
    CHECK_THROWS(loo_residuals(data, Kernel::sobolev(), 0.1));
  }
}

TEST_CASE("model persistence round trip is bit exact") {
  Dataset data = random_dataset(25, 77);
  TrainedModel model = fit_bckrr(data, Kernel::gaussian(), 1e-3);
  std::string text = model_to_json(model);
  TrainedModel back = model_from_json(text);
  CHECK(back.lambda == model.lambda);
  CHECK(back.variant == model.variant);
  CHECK(back.kernel.kind() == model.kernel.kind());
  REQUIRE(back.coeffs.size() == model.coeffs.size());
  for (Eigen::Index i = 0; i < model.coeffs.size(); ++i) {
    CHECK(back.coeffs[i] == model.coeffs[i]);
    CHECK(back.support[static_cast<std::size_t>(i)] ==
          model.support[static_cast<std::size_t>(i)]);
  }

  auto path = std::filesystem::temp_directory_path() / "dkr_model_test.json";
  save_model(model, path.string());
  TrainedModel loaded = load_model(path.string());
  CHECK(loaded.coeffs == model.coeffs);
  std::filesystem::remove(path);
}
