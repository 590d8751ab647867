// Data-augmented expectile regression: initialization on uncensored rows,
// iterative imputation of censored responses from per-level model
// predictions restricted to each observation's feasible set, per-level
// retraining, and prediction averaging across iterations.
//
// The same loop also serves the comparison pipelines: a policy selects what
// the per-iteration training response is (imputed, observed-as-is, or the
// true latent response), and everything else — level grid, derived seeds,
// averaging — stays identical. That makes the pipelines bitwise comparable
// on uncensored data.
#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cerx/censoring.hpp"
#include "cerx/errors.hpp"
#include "cerx/expectile.hpp"
#include "cerx/linear_expectile.hpp"
#include "cerx/matrix.hpp"
#include "cerx/mlp.hpp"
#include "cerx/parallel.hpp"
#include "cerx/rng.hpp"

namespace cerx {

struct DaernnConfig {
  int grid_size = 0;   // m; 0 selects default_grid_size(n_train)
  int iterations = 5;  // H
  std::vector<double> target_levels = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  MlpSpec spec;        // input_dim 0 is filled from the data
  TrainConfig train;
  bool warm_start = false;  // reuse previous-iteration weights when refitting
  int jobs = 1;             // parallelism across per-level fits

  void validate() const {
    if (iterations < 1) throw std::domain_error("DaernnConfig: iterations must be positive");
    if (grid_size < 0) throw std::domain_error("DaernnConfig: grid size must be nonnegative");
    if (target_levels.empty()) throw std::domain_error("DaernnConfig: no reporting levels");
    for (double t : target_levels) {
      if (!(t > 0.0 && t < 1.0)) {
        throw std::domain_error("DaernnConfig: reporting levels must lie in (0, 1)");
      }
    }
  }
};

// Trained models for one iteration, one per stored grid index (1-based,
// ascending). Full-grid banks store all m levels.
template <class Model>
struct ModelBank {
  int iteration = 0;  // h
  std::vector<int> grid_indices;
  std::vector<Model> models;
};

enum class Provenance { Observed, Imputed, BoundaryFallback };

// Pseudo fully observed responses for one iteration.
struct AugmentedDataset {
  std::vector<double> responses;
  std::vector<Provenance> provenance;

  std::size_t count(Provenance p) const {
    std::size_t c = 0;
    for (auto q : provenance) {
      if (q == p) ++c;
    }
    return c;
  }
};

// Predictions over iterations and stored levels, plus their across-iteration
// mean. Rows index test points; columns follow `grid_indices`.
struct ExpectilePredictionSet {
  int grid_size = 0;                 // m
  std::vector<int> grid_indices;     // stored 1-based grid indices, ascending
  std::vector<double> stored_levels; // tau values for the stored columns
  std::vector<double> target_levels;
  std::vector<int> target_columns;   // column in the stored matrices per target
  std::vector<Matrix> per_iteration; // one n_test x n_stored matrix per h
  Matrix average;
  std::vector<std::pair<std::size_t, std::size_t>> imputation_counts;  // per h: {imputed, fallback}
  std::vector<std::string> warnings;

  double average_at(int row, std::size_t target_idx) const {
    return average(row, target_columns[target_idx]);
  }

  std::vector<double> average_column(std::size_t target_idx) const {
    std::vector<double> out(static_cast<std::size_t>(average.rows));
    for (int i = 0; i < average.rows; ++i) out[static_cast<std::size_t>(i)] = average_at(i, target_idx);
    return out;
  }
};

// Selects the training response each iteration: imputed values for censored
// rows, the observed response as recorded, or the latent truth.
enum class ResponsePolicy { AugmentCensored, ObservedResponse, TrueResponse };

// Fits one network per level; the seed fully determines the fit.
struct MlpLearner {
  using Model = MlpParams;
  MlpSpec spec;
  TrainConfig train;

  Model fit(const std::vector<std::vector<double>>& xs, const std::vector<double>& ys,
            double tau, std::uint64_t seed, const Model* start = nullptr) const {
    TrainConfig cfg = train;
    cfg.seed = seed;
    return train_mbgd(xs, ys, spec, cfg, tau, start);
  }

  double predict_one(const Model& model, std::span<const double> x) const {
    return forward(spec, model, x, PassMode::Eval);
  }
};

// Linear expectile learner; deterministic, the seed is ignored.
struct LinearLearner {
  using Model = LinearExpectileModel;

  Model fit(const std::vector<std::vector<double>>& xs, const std::vector<double>& ys,
            double tau, std::uint64_t, const Model* = nullptr) const {
    return linear_expectile_fit(xs, ys, ExpectileLevel(tau));
  }

  double predict_one(const Model& model, std::span<const double> x) const {
    return linear_predict(model, x);
  }
};

// Picks a pseudo response for one censored observation: a uniform draw from
// the feasible candidates, or the censoring boundary when none is feasible.
inline std::pair<double, Provenance> impute_response(
    std::span<const double> candidates, const FeasibleSet& feasible,
    double boundary, Rng& rng) {
  std::vector<double> usable;
  usable.reserve(candidates.size());
  for (double c : candidates) {
    if (contains(feasible, c)) usable.push_back(c);
  }
  if (usable.empty()) return {boundary, Provenance::BoundaryFallback};
  return {usable[rng.uniform_index(usable.size())], Provenance::Imputed};
}

namespace detail {

inline std::vector<std::vector<double>> covariates_of(
    const std::vector<CensoredObservation>& data) {
  std::vector<std::vector<double>> xs;
  xs.reserve(data.size());
  for (const auto& obs : data) xs.push_back(obs.x);
  return xs;
}

template <class Learner>
void fit_bank_levels(const Learner& learner, const LevelGrid& grid,
                     const std::vector<std::vector<double>>& xs,
                     const std::vector<double>& ys, std::uint64_t seed, int h,
                     int jobs, ModelBank<typename Learner::Model>& bank,
                     const ModelBank<typename Learner::Model>* warm_from) {
  bank.iteration = h;
  bank.models.resize(bank.grid_indices.size());
  std::exception_ptr first_error;
  std::mutex error_mutex;
  parallel_for(bank.grid_indices.size(), jobs, [&](std::size_t slot) {
    const int k = bank.grid_indices[slot];
    const double tau = grid.tau(k);
    const typename Learner::Model* start = nullptr;
    if (warm_from != nullptr) start = &warm_from->models[slot];
    try {
      bank.models[slot] = learner.fit(
          xs, ys, tau, derive_seed(seed, stream::kLevelFit, static_cast<std::uint64_t>(h),
                                   static_cast<std::uint64_t>(k)),
          start);
    } catch (const std::exception& e) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) {
        first_error = std::make_exception_ptr(train_error(
            "fit failed at iteration " + std::to_string(h) + ", level tau=" +
            std::to_string(tau) + ": " + e.what()));
      }
    }
  });
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

// Initialization: one model per grid level trained on the uncensored subset
// only, with seeds derived for iteration 0.
template <class Learner>
ModelBank<typename Learner::Model> initialize(
    const Learner& learner, const std::vector<CensoredObservation>& train_data,
    const LevelGrid& grid, std::uint64_t seed, int jobs = 1,
    std::vector<std::string>* warnings = nullptr) {
  std::vector<std::vector<double>> xs;
  std::vector<double> ys;
  for (const auto& obs : train_data) {
    if (obs.delta == CensorType::Uncensored) {
      xs.push_back(obs.x);
      ys.push_back(obs.t);
    }
  }
  if (xs.empty()) {
    throw std::domain_error(
        "initialization impossible: no uncensored observations to train on");
  }
  if (xs.size() < 30 && warnings != nullptr) {
    warnings->push_back("only " + std::to_string(xs.size()) +
                        " uncensored observations available for initialization");
  }
  ModelBank<typename Learner::Model> bank;
  bank.grid_indices.resize(static_cast<std::size_t>(grid.m));
  for (int k = 1; k <= grid.m; ++k) bank.grid_indices[static_cast<std::size_t>(k - 1)] = k;
  detail::fit_bank_levels(learner, grid, xs, ys, seed, 0, jobs, bank, nullptr);
  return bank;
}

// Data augmentation: for each censored observation, gather the bank's
// fitted expectiles at its covariates, keep the feasible ones, and draw one
// uniformly; fall back to the censoring boundary when none is feasible.
// Uncensored observations pass through unchanged.
template <class Learner>
AugmentedDataset augment(const Learner& learner,
                         const ModelBank<typename Learner::Model>& bank,
                         const std::vector<CensoredObservation>& data, Rng& rng) {
  AugmentedDataset out;
  out.responses.reserve(data.size());
  out.provenance.reserve(data.size());
  std::vector<double> candidates(bank.models.size());
  for (const auto& obs : data) {
    if (obs.delta == CensorType::Uncensored) {
      out.responses.push_back(obs.t);
      out.provenance.push_back(Provenance::Observed);
      continue;
    }
    for (std::size_t j = 0; j < bank.models.size(); ++j) {
      candidates[j] = learner.predict_one(bank.models[j], obs.x);
    }
    auto [value, prov] =
        impute_response(candidates, feasible_set(obs), boundary_value(obs), rng);
    out.responses.push_back(value);
    out.provenance.push_back(prov);
  }
  return out;
}

// Model updating: retrains one model per stored level on the augmented
// responses, with fresh iteration-h seeds (or warm starts when configured).
template <class Learner>
ModelBank<typename Learner::Model> update(
    const Learner& learner, const std::vector<std::vector<double>>& xs,
    const AugmentedDataset& augmented, const LevelGrid& grid,
    const std::vector<int>& grid_indices, std::uint64_t seed, int h, int jobs,
    const ModelBank<typename Learner::Model>* warm_from = nullptr) {
  if (augmented.responses.size() != xs.size()) {
    throw std::domain_error("update: augmented responses do not cover the training set");
  }
  ModelBank<typename Learner::Model> bank;
  bank.grid_indices = grid_indices;
  detail::fit_bank_levels(learner, grid, xs, augmented.responses, seed, h, jobs, bank, warm_from);
  return bank;
}

// Full pipeline: initialization (when imputation is needed), then H rounds
// of response selection, per-level retraining, and test-set prediction;
// the reported predictor is the across-iteration mean.
template <class Learner>
ExpectilePredictionSet run_pipeline(const Learner& learner,
                                    const std::vector<CensoredObservation>& train_data,
                                    const std::vector<std::vector<double>>& test_xs,
                                    const DaernnConfig& config, ResponsePolicy policy,
                                    std::vector<ModelBank<typename Learner::Model>>* banks_out = nullptr) {
  config.validate();
  if (train_data.empty()) throw std::domain_error("run_pipeline: empty training set");
  const int m = config.grid_size > 0 ? config.grid_size
                                     : default_grid_size(train_data.size());
  const LevelGrid grid = expectile_grid(m);
  const std::uint64_t seed = config.train.seed;
  const int H = config.iterations;

  ExpectilePredictionSet result;
  result.grid_size = m;
  result.target_levels = config.target_levels;

  // Stored levels: the whole grid when imputing (every level feeds the
  // candidate sets), otherwise just the grid levels the report needs.
  std::vector<int> stored;
  if (policy == ResponsePolicy::AugmentCensored) {
    stored.resize(static_cast<std::size_t>(m));
    for (int k = 1; k <= m; ++k) stored[static_cast<std::size_t>(k - 1)] = k;
  } else {
    for (double t : config.target_levels) stored.push_back(nearest_grid_index(m, t));
    std::sort(stored.begin(), stored.end());
    stored.erase(std::unique(stored.begin(), stored.end()), stored.end());
  }
  result.grid_indices = stored;
  for (int k : stored) result.stored_levels.push_back(grid.tau(k));
  for (double t : config.target_levels) {
    const int k = nearest_grid_index(m, t);
    const auto it = std::lower_bound(stored.begin(), stored.end(), k);
    result.target_columns.push_back(static_cast<int>(it - stored.begin()));
  }

  const auto xs = detail::covariates_of(train_data);

  // Fixed responses for the no-imputation policies.
  AugmentedDataset fixed;
  if (policy != ResponsePolicy::AugmentCensored) {
    fixed.responses.reserve(train_data.size());
    fixed.provenance.assign(train_data.size(), Provenance::Observed);
    for (const auto& obs : train_data) {
      if (policy == ResponsePolicy::TrueResponse) {
        if (!obs.y_true) {
          throw std::domain_error("run_pipeline: observation lacks y_true");
        }
        fixed.responses.push_back(*obs.y_true);
      } else {
        fixed.responses.push_back(obs.t);
      }
    }
  }

  ModelBank<typename Learner::Model> bank;
  if (policy == ResponsePolicy::AugmentCensored) {
    bank = initialize(learner, train_data, grid, seed, config.jobs, &result.warnings);
  }

  const int n_test = static_cast<int>(test_xs.size());
  const int n_stored = static_cast<int>(stored.size());
  result.average.resize(n_test, n_stored);

  for (int h = 1; h <= H; ++h) {
    AugmentedDataset current;
    if (policy == ResponsePolicy::AugmentCensored) {
      Rng aug_rng(derive_seed(seed, stream::kAugment, static_cast<std::uint64_t>(h)));
      current = augment(learner, bank, train_data, aug_rng);
      result.imputation_counts.emplace_back(current.count(Provenance::Imputed),
                                            current.count(Provenance::BoundaryFallback));
    }
    const AugmentedDataset& responses =
        policy == ResponsePolicy::AugmentCensored ? current : fixed;
    const ModelBank<typename Learner::Model>* warm =
        (config.warm_start && (policy != ResponsePolicy::AugmentCensored ? h > 1 : true))
            ? &bank
            : nullptr;
    ModelBank<typename Learner::Model> next =
        update(learner, xs, responses, grid, stored, seed, h, config.jobs,
               warm != nullptr && !warm->models.empty() &&
                       warm->models.size() == stored.size()
                   ? warm
                   : nullptr);

    Matrix preds(n_test, n_stored);
    for (int i = 0; i < n_test; ++i) {
      for (int c = 0; c < n_stored; ++c) {
        preds(i, c) = learner.predict_one(next.models[static_cast<std::size_t>(c)],
                                          test_xs[static_cast<std::size_t>(i)]);
      }
    }
    for (std::size_t idx = 0; idx < result.average.data.size(); ++idx) {
      result.average.data[idx] += preds.data[idx];
    }
    result.per_iteration.push_back(std::move(preds));
    if (banks_out != nullptr) banks_out->push_back(next);
    bank = std::move(next);
  }

  const double inv_h = 1.0 / static_cast<double>(H);
  for (double& v : result.average.data) v *= inv_h;
  return result;
}

// The estimator itself: imputation-driven pipeline with the network learner.
inline ExpectilePredictionSet run_daernn(const std::vector<CensoredObservation>& train_data,
                                         const std::vector<std::vector<double>>& test_xs,
                                         DaernnConfig config,
                                         std::vector<ModelBank<MlpParams>>* banks_out = nullptr) {
  if (config.spec.input_dim == 0 && !train_data.empty()) {
    config.spec.input_dim = static_cast<int>(train_data.front().x.size());
  }
  MlpLearner learner{config.spec, config.train};
  return run_pipeline(learner, train_data, test_xs, config,
                      ResponsePolicy::AugmentCensored, banks_out);
}

}  // namespace cerx
