// Comparison methods: training on observed responses as if uncensored
// (FULL), on the latent truth (Oracle, simulation only), and the
// augmentation loop with a linear expectile learner (DALinear). The
// pipeline variants run through the same loop and seed derivation as the
// network estimator, so the three coincide bitwise on uncensored data.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "cerx/censoring.hpp"
#include "cerx/daernn.hpp"
#include "cerx/linear_expectile.hpp"
#include "cerx/mlp.hpp"

namespace cerx {

namespace detail {

inline std::vector<double> observed_responses(const std::vector<CensoredObservation>& data) {
  std::vector<double> ys;
  ys.reserve(data.size());
  for (const auto& obs : data) ys.push_back(obs.t);
  return ys;
}

inline std::vector<double> true_responses(const std::vector<CensoredObservation>& data) {
  std::vector<double> ys;
  ys.reserve(data.size());
  for (const auto& obs : data) {
    if (!obs.y_true) {
      throw std::domain_error("train_oracle: observation lacks y_true");
    }
    ys.push_back(*obs.y_true);
  }
  return ys;
}

}  // namespace detail

// Single network fit on (x, t) for all observations, censoring ignored.
inline MlpParams train_full(const std::vector<CensoredObservation>& data,
                            const MlpSpec& spec, const TrainConfig& config,
                            ExpectileLevel tau) {
  if (data.empty()) throw std::domain_error("train_full: empty training set");
  return train_mbgd(detail::covariates_of(data), detail::observed_responses(data),
                    spec, config, tau.value());
}

// Single network fit on (x, y_true); simulation-only reference.
inline MlpParams train_oracle(const std::vector<CensoredObservation>& data,
                              const MlpSpec& spec, const TrainConfig& config,
                              ExpectileLevel tau) {
  if (data.empty()) throw std::domain_error("train_oracle: empty training set");
  return train_mbgd(detail::covariates_of(data), detail::true_responses(data),
                    spec, config, tau.value());
}

inline ExpectilePredictionSet run_full(const std::vector<CensoredObservation>& train_data,
                                       const std::vector<std::vector<double>>& test_xs,
                                       DaernnConfig config,
                                       std::vector<ModelBank<MlpParams>>* banks_out = nullptr) {
  if (config.spec.input_dim == 0 && !train_data.empty()) {
    config.spec.input_dim = static_cast<int>(train_data.front().x.size());
  }
  MlpLearner learner{config.spec, config.train};
  return run_pipeline(learner, train_data, test_xs, config,
                      ResponsePolicy::ObservedResponse, banks_out);
}

inline ExpectilePredictionSet run_oracle(const std::vector<CensoredObservation>& train_data,
                                         const std::vector<std::vector<double>>& test_xs,
                                         DaernnConfig config,
                                         std::vector<ModelBank<MlpParams>>* banks_out = nullptr) {
  if (config.spec.input_dim == 0 && !train_data.empty()) {
    config.spec.input_dim = static_cast<int>(train_data.front().x.size());
  }
  MlpLearner learner{config.spec, config.train};
  return run_pipeline(learner, train_data, test_xs, config,
                      ResponsePolicy::TrueResponse, banks_out);
}

// The augmentation loop with the linear learner in place of the network;
// grid, feasibility filtering, fallback, and averaging are unchanged.
inline ExpectilePredictionSet run_dalinear(const std::vector<CensoredObservation>& train_data,
                                           const std::vector<std::vector<double>>& test_xs,
                                           const DaernnConfig& config,
                                           std::vector<ModelBank<LinearExpectileModel>>* banks_out = nullptr) {
  LinearLearner learner;
  return run_pipeline(learner, train_data, test_xs, config,
                      ResponsePolicy::AugmentCensored, banks_out);
}

}  // namespace cerx
