// Linear expectile regression fitted by iteratively reweighted least
// squares: asymmetric weights |tau - 1(residual < 0)| recomputed each pass,
// each pass solving the weighted normal equations.
#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cerx/errors.hpp"
#include "cerx/expectile.hpp"

namespace cerx {

// Coefficients beta[0] (intercept), beta[1..p]; fitted at a fixed level.
struct LinearExpectileModel {
  std::vector<double> beta;
  double tau = 0.5;
};

inline double linear_predict(const LinearExpectileModel& model,
                             std::span<const double> x) {
  if (x.size() + 1 != model.beta.size()) {
    throw std::domain_error("linear_predict: covariate dimension mismatch");
  }
  double v = model.beta[0];
  for (std::size_t j = 0; j < x.size(); ++j) v += model.beta[j + 1] * x[j];
  return v;
}

struct IrlsTrace {
  std::vector<double> objectives;  // check-loss objective after each pass
  int passes = 0;
};

namespace detail {

// Solves A x = b for symmetric positive definite A via Cholesky; throws on
// a non-positive pivot (rank-deficient design).
inline std::vector<double> solve_spd(std::vector<double> a, std::vector<double> b,
                                     std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double d = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
    if (!(d > 1e-12)) {
      throw std::domain_error("linear_expectile_fit: design matrix is rank deficient");
    }
    const double ljj = std::sqrt(d);
    a[j * n + j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = s / ljj;
    }
  }
  // L y = b
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= a[i * n + k] * b[k];
    b[i] = s / a[i * n + i];
  }
  // L^T x = y
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[k * n + i] * b[k];
    b[i] = s / a[i * n + i];
  }
  return b;
}

}  // namespace detail

inline LinearExpectileModel linear_expectile_fit(
    const std::vector<std::vector<double>>& xs, std::span<const double> ys,
    ExpectileLevel tau, IrlsTrace* trace = nullptr) {
  if (xs.empty() || xs.size() != ys.size()) {
    throw std::domain_error("linear_expectile_fit: empty or mismatched data");
  }
  const std::size_t n = xs.size();
  const std::size_t p1 = xs[0].size() + 1;
  const double t = tau.value();

  auto design_row = [&](std::size_t i, std::vector<double>& row) {
    row[0] = 1.0;
    for (std::size_t j = 0; j + 1 < p1; ++j) row[j + 1] = xs[i][j];
  };

  std::vector<double> beta(p1, 0.0), row(p1), resid(n, 0.0);
  std::vector<double> weights(n, 1.0);  // first pass is ordinary least squares
  if (trace) {
    trace->objectives.clear();
    trace->passes = 0;
  }

  double max_step = 0.0;
  for (int pass = 0; pass < 100; ++pass) {
    std::vector<double> a(p1 * p1, 0.0), b(p1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      design_row(i, row);
      const double w = weights[i];
      for (std::size_t j = 0; j < p1; ++j) {
        b[j] += w * row[j] * ys[i];
        for (std::size_t k = 0; k <= j; ++k) a[j * p1 + k] += w * row[j] * row[k];
      }
    }
    for (std::size_t j = 0; j < p1; ++j) {
      for (std::size_t k = j + 1; k < p1; ++k) a[j * p1 + k] = a[k * p1 + j];
    }
    std::vector<double> next = detail::solve_spd(std::move(a), std::move(b), p1);

    max_step = 0.0;
    for (std::size_t j = 0; j < p1; ++j) {
      max_step = std::max(max_step, std::abs(next[j] - beta[j]));
    }
    beta = std::move(next);

    double objective = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      design_row(i, row);
      double pred = 0.0;
      for (std::size_t j = 0; j < p1; ++j) pred += beta[j] * row[j];
      resid[i] = ys[i] - pred;
      objective += check_loss_raw(resid[i], t);
      weights[i] = check_weight(resid[i], t);
    }
    if (trace) {
      trace->objectives.push_back(objective);
      trace->passes = pass + 1;
    }
    if (pass > 0 && max_step < 1e-8) {
      return {std::move(beta), t};
    }
  }
  throw train_error("linear_expectile_fit: IRLS did not converge in 100 passes; last max |delta beta| = " +
                    std::to_string(max_step));
}

inline LinearExpectileModel linear_expectile_fit(
    const std::vector<std::vector<double>>& xs, const std::vector<double>& ys,
    ExpectileLevel tau, IrlsTrace* trace = nullptr) {
  return linear_expectile_fit(xs, std::span<const double>(ys), tau, trace);
}

}  // namespace cerx
