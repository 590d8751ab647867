#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "cerx/linear_expectile.hpp"
#include "cerx/rng.hpp"

using namespace cerx;
using Catch::Approx;

TEST_CASE("tau one-half coincides with least squares") {
  Rng rng(10);
  std::vector<std::vector<double>> xs;
  std::vector<double> ys;
  for (int i = 0; i < 60; ++i) {
    const double x1 = rng.normal(), x2 = rng.normal();
    xs.push_back({x1, x2});
    ys.push_back(1.5 - 2.0 * x1 + 0.5 * x2 + rng.normal());
  }
  const auto model = linear_expectile_fit(xs, ys, ExpectileLevel(0.5));

  // ordinary least squares by normal equations, computed independently
  double a[9] = {0}, b[3] = {0};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double row[3] = {1.0, xs[i][0], xs[i][1]};
    for (int j = 0; j < 3; ++j) {
      b[j] += row[j] * ys[i];
      for (int k = 0; k < 3; ++k) a[j * 3 + k] += row[j] * row[k];
    }
  }
  // solve 3x3 by Gaussian elimination
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::abs(a[r * 3 + col]) > std::abs(a[piv * 3 + col])) piv = r;
    }
    for (int c = 0; c < 3; ++c) std::swap(a[col * 3 + c], a[piv * 3 + c]);
    std::swap(b[col], b[piv]);
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = a[r * 3 + col] / a[col * 3 + col];
      for (int c = 0; c < 3; ++c) a[r * 3 + c] -= f * a[col * 3 + c];
      b[r] -= f * b[col];
    }
  }
  for (int j = 0; j < 3; ++j) {
    REQUIRE(model.beta[static_cast<std::size_t>(j)] ==
            Approx(b[j] / a[j * 3 + j]).margin(1e-8));
  }
}

TEST_CASE("noise-free linear data is recovered exactly at any level") {
  std::vector<std::vector<double>> xs;
  std::vector<double> ys;
  for (int i = 0; i < 25; ++i) {
    const double x = -2.0 + 0.17 * i;
    xs.push_back({x});
    ys.push_back(3.0 + 0.75 * x);
  }
  for (double tau : {0.1, 0.5, 0.9}) {
    const auto model = linear_expectile_fit(xs, ys, ExpectileLevel(tau));
    REQUIRE(model.beta[0] == Approx(3.0).margin(1e-8));
    REQUIRE(model.beta[1] == Approx(0.75).margin(1e-8));
    REQUIRE(linear_predict(model, std::vector<double>{2.0}) == Approx(4.5).margin(1e-7));
  }
}

TEST_CASE("matches brute-force minimization on a tiny sample") {
  const std::vector<std::vector<double>> xs{{0.0}, {1.0}, {2.0}};
  const std::vector<double> ys{0.0, 1.0, 0.0};
  const double tau = 0.9;

  double best0 = 0.0, best1 = 0.0, best_val = 1e300;
  for (double b0 = -2.0; b0 <= 2.0; b0 += 1e-3) {
    for (double b1 = -2.0; b1 <= 2.0; b1 += 1e-3) {
      double val = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        val += check_loss_raw(ys[i] - b0 - b1 * xs[i][0], tau);
      }
      if (val < best_val) {
        best_val = val;
        best0 = b0;
        best1 = b1;
      }
    }
  }
  // refine around the coarse winner at the 1e-4 step
  double fine0 = best0, fine1 = best1;
  for (double b0 = best0 - 2e-3; b0 <= best0 + 2e-3; b0 += 1e-4) {
    for (double b1 = best1 - 2e-3; b1 <= best1 + 2e-3; b1 += 1e-4) {
      double val = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        val += check_loss_raw(ys[i] - b0 - b1 * xs[i][0], tau);
      }
      if (val < best_val) {
        best_val = val;
        fine0 = b0;
        fine1 = b1;
      }
    }
  }
  const auto model = linear_expectile_fit(xs, ys, ExpectileLevel(tau));
  REQUIRE(model.beta[0] == Approx(fine0).margin(2e-4));
  REQUIRE(model.beta[1] == Approx(fine1).margin(2e-4));
}

TEST_CASE("IRLS objective never increases across passes") {
  Rng rng(77);
  for (double tau : {0.2, 0.5, 0.85}) {
    std::vector<std::vector<double>> xs;
    std::vector<double> ys;
    for (int i = 0; i < 80; ++i) {
      const double x1 = rng.normal(), x2 = rng.uniform(-1.0, 1.0);
      xs.push_back({x1, x2});
      ys.push_back(0.3 + x1 - 2.0 * x2 + rng.student_t(3));
    }
    IrlsTrace trace;
    linear_expectile_fit(xs, ys, ExpectileLevel(tau), &trace);
    REQUIRE(trace.passes >= 2);
    for (std::size_t i = 1; i < trace.objectives.size(); ++i) {
      REQUIRE(trace.objectives[i] <= trace.objectives[i - 1] * (1.0 + 1e-12) + 1e-12);
    }
  }
}

TEST_CASE("rank-deficient designs are rejected") {
  std::vector<std::vector<double>> xs;
  std::vector<double> ys;
  for (int i = 0; i < 10; ++i) {
    const double x = 0.1 * i;
    xs.push_back({x, 2.0 * x});  // second column is a multiple of the first
    ys.push_back(x);
  }
  REQUIRE_THROWS_AS(linear_expectile_fit(xs, ys, ExpectileLevel(0.5)), std::domain_error);
}
