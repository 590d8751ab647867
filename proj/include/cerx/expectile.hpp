// Expectile check loss, its derivative, scalar expectile solving, and the
// level grid used for imputation.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace cerx {

// An asymmetry level in the open interval (0, 1).
class ExpectileLevel {
 public:
  explicit ExpectileLevel(double tau) : tau_(tau) {
    if (!(tau > 0.0 && tau < 1.0)) {
      throw std::domain_error("expectile level must lie in (0, 1)");
    }
  }
  double value() const { return tau_; }

 private:
  double tau_;
};

// |tau - 1(u < 0)|: tau on nonnegative residuals, 1 - tau on negative ones.
// The indicator is strict, so u = 0 takes weight tau.
inline double check_weight(double u, double tau) {
  return u < 0.0 ? 1.0 - tau : tau;
}

inline double check_loss_raw(double u, double tau) {
  return 0.5 * check_weight(u, tau) * u * u;
}

inline double check_loss(double u, ExpectileLevel tau) {
  if (!std::isfinite(u)) throw std::domain_error("check_loss: non-finite residual");
  return check_loss_raw(u, tau.value());
}

// d/du of check_loss; both branches vanish at u = 0, so the derivative is
// continuous there.
inline double check_loss_grad(double u, ExpectileLevel tau) {
  if (!std::isfinite(u)) {
    throw std::domain_error("check_loss_grad: non-finite residual");
  }
  return check_weight(u, tau.value()) * u;
}

// Unconditional expectile of a sample: the unique root of the first-order
// condition sum_i |tau - 1(v_i < theta)| (v_i - theta) = 0. Newton steps
// (the condition is piecewise linear and strictly decreasing) with a
// bisection fallback whenever a step leaves the current bracket.
inline double sample_expectile(std::span<const double> values,
                               ExpectileLevel tau) {
  if (values.empty()) throw std::domain_error("sample_expectile: empty sample");
  const double t = tau.value();
  double lo = values[0], hi = values[0], mean = 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw std::domain_error("sample_expectile: non-finite value");
    }
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    mean += v;
  }
  mean /= static_cast<double>(values.size());
  if (lo == hi) return lo;

  double theta = mean;
  double blo = lo, bhi = hi;
  for (int iter = 0; iter < 200; ++iter) {
    double g = 0.0, wsum = 0.0;
    for (double v : values) {
      const double u = v - theta;
      const double w = check_weight(u, t);
      g += w * u;
      wsum += w;
    }
    if (g > 0.0) {
      blo = std::max(blo, theta);
    } else {
      bhi = std::min(bhi, theta);
    }
    double next = theta + g / wsum;
    if (next < blo || next > bhi) next = 0.5 * (blo + bhi);
    if (std::abs(next - theta) <= 1e-10) return next;
    theta = next;
  }
  return theta;
}

inline double sample_expectile(const std::vector<double>& values,
                               ExpectileLevel tau) {
  return sample_expectile(std::span<const double>(values), tau);
}

// Levels k/(m+1), k = 1..m; strictly increasing and symmetric about 0.5.
struct LevelGrid {
  int m = 0;
  std::vector<ExpectileLevel> levels;

  double tau(int k) const { return levels[static_cast<std::size_t>(k - 1)].value(); }  // 1-based
};

inline LevelGrid expectile_grid(int m) {
  if (m < 1) throw std::domain_error("expectile_grid: grid size must be positive");
  LevelGrid grid;
  grid.m = m;
  grid.levels.reserve(static_cast<std::size_t>(m));
  for (int k = 1; k <= m; ++k) {
    grid.levels.emplace_back(static_cast<double>(k) / static_cast<double>(m + 1));
  }
  return grid;
}

// max(floor(sqrt(n)), 99); overridable through configuration.
inline int default_grid_size(std::size_t n) {
  if (n == 0) throw std::domain_error("default_grid_size: empty sample");
  const int root = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n))));
  return std::max(root, 99);
}

// 1-based grid index whose level is closest to the requested one. Ties
// round up (std::lround half-away-from-zero on positive input).
inline int nearest_grid_index(int m, double target) {
  const long k = std::lround(target * static_cast<double>(m + 1));
  return static_cast<int>(std::clamp(k, 1L, static_cast<long>(m)));
}

}  // namespace cerx
