// Censored-data model: censoring types, observed-response construction,
// feasible sets for the latent response, boundary fallbacks, and artificial
// censoring injection.
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cerx/rng.hpp"

namespace cerx {

enum class CensorType : int { Uncensored = 0, Right = 1, Left = 2, Interval = 3 };

// One observation: covariates, observed response t, censoring code, and the
// bounds the code demands (Right carries upper, Left carries lower, Interval
// carries both). y_true is simulation-only and hidden from estimators.
struct CensoredObservation {
  std::vector<double> x;
  double t = 0.0;
  CensorType delta = CensorType::Uncensored;
  std::optional<double> lower;
  std::optional<double> upper;
  std::optional<double> y_true;
};

// Values the latent response may take: a point for uncensored data, an open
// half-line or open interval otherwise.
struct FeasibleSet {
  enum class Kind { Point, AboveLower, BelowUpper, Between };
  Kind kind = Kind::Point;
  double a = 0.0;  // Point value, lower endpoint, or upper endpoint (BelowUpper)
  double b = 0.0;  // upper endpoint (Between only)

  static FeasibleSet point(double y) { return {Kind::Point, y, 0.0}; }
  static FeasibleSet above(double lo) { return {Kind::AboveLower, lo, 0.0}; }
  static FeasibleSet below(double hi) { return {Kind::BelowUpper, hi, 0.0}; }
  static FeasibleSet between(double lo, double hi) { return {Kind::Between, lo, hi}; }
};

// Open-endpoint membership; Point requires exact equality.
inline bool contains(const FeasibleSet& s, double v) {
  switch (s.kind) {
    case FeasibleSet::Kind::Point: return v == s.a;
    case FeasibleSet::Kind::AboveLower: return v > s.a;
    case FeasibleSet::Kind::BelowUpper: return v < s.a;
    case FeasibleSet::Kind::Between: return s.a < v && v < s.b;
  }
  return false;
}

inline FeasibleSet feasible_set(const CensoredObservation& obs) {
  switch (obs.delta) {
    case CensorType::Uncensored: return FeasibleSet::point(obs.t);
    case CensorType::Right: return FeasibleSet::above(*obs.upper);
    case CensorType::Left: return FeasibleSet::below(*obs.lower);
    case CensorType::Interval: return FeasibleSet::between(*obs.lower, *obs.upper);
  }
  throw std::domain_error("feasible_set: invalid censoring code");
}

// Representative value at the censoring boundary, used when imputation finds
// no feasible candidate.
inline double boundary_value(const CensoredObservation& obs) {
  switch (obs.delta) {
    case CensorType::Right: return *obs.upper;
    case CensorType::Left: return *obs.lower;
    case CensorType::Interval: return 0.5 * (*obs.lower + *obs.upper);
    case CensorType::Uncensored: break;
  }
  throw std::domain_error("boundary_value: observation is not censored");
}

// Per-observation censoring rule: the declared type plus the bounds it needs.
struct BoundScheme {
  CensorType kind = CensorType::Uncensored;
  std::optional<double> lower;
  std::optional<double> upper;
};

// Applies a censoring rule to a latent response. Right censoring records
// t = min(y, upper); left records t = max(y, lower). An interval rule marks
// the observation censored exactly when the response falls strictly inside
// (lower, upper); the analyst then knows only the interval, so t is stored
// as its midpoint. Responses outside the interval stay uncensored. The
// returned observation keeps y for simulation scoring; covariates are left
// for the caller to attach.
inline CensoredObservation apply_censoring(double y, const BoundScheme& scheme) {
  if (!std::isfinite(y)) throw std::domain_error("apply_censoring: non-finite response");
  CensoredObservation obs;
  obs.y_true = y;
  switch (scheme.kind) {
    case CensorType::Uncensored:
      obs.t = y;
      break;
    case CensorType::Right: {
      if (!scheme.upper) throw std::domain_error("apply_censoring: right rule needs an upper bound");
      const double r = *scheme.upper;
      if (y > r) {
        obs.t = r;
        obs.delta = CensorType::Right;
        obs.upper = r;
      } else {
        obs.t = y;
      }
      break;
    }
    case CensorType::Left: {
      if (!scheme.lower) throw std::domain_error("apply_censoring: left rule needs a lower bound");
      const double l = *scheme.lower;
      if (y < l) {
        obs.t = l;
        obs.delta = CensorType::Left;
        obs.lower = l;
      } else {
        obs.t = y;
      }
      break;
    }
    case CensorType::Interval: {
      if (!scheme.lower || !scheme.upper) {
        throw std::domain_error("apply_censoring: interval rule needs both bounds");
      }
      const double l = *scheme.lower, r = *scheme.upper;
      if (!(l < r)) throw std::domain_error("apply_censoring: interval bounds must satisfy lower < upper");
      if (l < y && y < r) {
        obs.t = 0.5 * (l + r);
        obs.delta = CensorType::Interval;
        obs.lower = l;
        obs.upper = r;
      } else {
        obs.t = y;
      }
      break;
    }
  }
  return obs;
}

// Fully observed regression rows, kept as parallel arrays.
struct XYData {
  std::vector<std::vector<double>> xs;
  std::vector<double> ys;

  std::size_t size() const { return ys.size(); }
};

// Distribution a censoring bound is drawn from.
struct BoundDistribution {
  enum class Family { Normal, Exponential, Fixed };
  Family family = Family::Fixed;
  double a = 0.0;  // Normal mean, Exponential mean, or the fixed value
  double b = 0.0;  // Normal sd

  double sample(Rng& rng) const {
    switch (family) {
      case Family::Normal: return rng.normal(a, b);
      case Family::Exponential: return rng.exponential(a);
      case Family::Fixed: return a;
    }
    return a;
  }

  static BoundDistribution normal(double mean, double sd) {
    return {Family::Normal, mean, sd};
  }
  static BoundDistribution exponential(double mean) {
    return {Family::Exponential, mean, 0.0};
  }
  static BoundDistribution fixed(double v) { return {Family::Fixed, v, 0.0}; }
};

struct InjectionScheme {
  CensorType kind = CensorType::Right;
  BoundDistribution lower;  // Left and Interval
  BoundDistribution upper;  // Right and Interval
};

struct InjectionResult {
  std::vector<CensoredObservation> observations;
  double achieved_rate = 0.0;
};

// Draws per-observation bounds from the scheme and censors the data; the
// original responses are preserved as y_true. Interval bounds are redrawn
// until lower < upper.
inline InjectionResult inject_censoring(const XYData& data,
                                        const InjectionScheme& scheme,
                                        std::uint64_t seed) {
  if (scheme.kind == CensorType::Uncensored) {
    throw std::domain_error("inject_censoring: censoring kind must not be none");
  }
  if (data.size() == 0) throw std::domain_error("inject_censoring: empty dataset");
  Rng rng(seed);
  InjectionResult out;
  out.observations.reserve(data.size());
  std::size_t censored = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    BoundScheme rule;
    rule.kind = scheme.kind;
    switch (scheme.kind) {
      case CensorType::Right:
        rule.upper = scheme.upper.sample(rng);
        break;
      case CensorType::Left:
        rule.lower = scheme.lower.sample(rng);
        break;
      case CensorType::Interval: {
        double l = scheme.lower.sample(rng);
        double r = scheme.upper.sample(rng);
        while (!(l < r)) {
          if (!std::isfinite(l) || !std::isfinite(r)) break;
          l = scheme.lower.sample(rng);
          r = scheme.upper.sample(rng);
        }
        rule.lower = l;
        rule.upper = r;
        break;
      }
      case CensorType::Uncensored:
        break;
    }
    if ((rule.lower && !std::isfinite(*rule.lower)) ||
        (rule.upper && !std::isfinite(*rule.upper))) {
      throw std::domain_error("inject_censoring: bound sampler produced a non-finite bound");
    }
    CensoredObservation obs = apply_censoring(data.ys[i], rule);
    obs.x = data.xs[i];
    if (obs.delta != CensorType::Uncensored) ++censored;
    out.observations.push_back(std::move(obs));
  }
  out.achieved_rate = static_cast<double>(censored) / static_cast<double>(data.size());
  return out;
}

inline double censored_fraction(const std::vector<CensoredObservation>& data) {
  if (data.empty()) return 0.0;
  std::size_t c = 0;
  for (const auto& obs : data) {
    if (obs.delta != CensorType::Uncensored) ++c;
  }
  return static_cast<double>(c) / static_cast<double>(data.size());
}

inline std::string censor_type_name(CensorType kind) {
  switch (kind) {
    case CensorType::Uncensored: return "none";
    case CensorType::Right: return "right";
    case CensorType::Left: return "left";
    case CensorType::Interval: return "interval";
  }
  return "unknown";
}

}  // namespace cerx
