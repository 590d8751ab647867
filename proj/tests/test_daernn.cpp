#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cerx/baselines.hpp"
#include "cerx/daernn.hpp"
#include "cerx/simgen.hpp"

using namespace cerx;
using Catch::Approx;

namespace {

DaernnConfig small_config(int m = 9, int H = 2) {
  DaernnConfig cfg;
  cfg.grid_size = m;
  cfg.iterations = H;
  cfg.spec.hidden_widths = {8};
  cfg.spec.dropout_rate = 0.1;
  cfg.train.learning_rate = 0.05;
  cfg.train.epochs = 40;
  cfg.train.batch_size = 64;
  cfg.train.seed = 414;
  return cfg;
}

std::vector<CensoredObservation> scenario_data(CensorType kind, std::size_t n,
                                               std::uint64_t seed) {
  ScenarioSpec spec;
  spec.model = SimModel::Model1;
  spec.error = ErrorLaw::StdNormal;
  spec.censor_kind = kind;
  spec.target_rate = 0.25;
  spec.n = n;
  spec.seed = seed;
  return gen_scenario(spec);
}

bool matrices_equal(const Matrix& a, const Matrix& b) {
  return a.rows == b.rows && a.cols == b.cols && a.data == b.data;
}

}  // namespace

TEST_CASE("imputation draws uniformly from the feasible candidates") {
  CensoredObservation obs;
  obs.delta = CensorType::Right;
  obs.upper = 1.5;
  const std::vector<double> candidates{1.0, 1.6, 2.0};
  const auto feasible = feasible_set(obs);
  const double boundary = boundary_value(obs);

  Rng rng(1234);
  int picked_16 = 0, picked_20 = 0;
  for (int i = 0; i < 4000; ++i) {
    const auto [value, prov] = impute_response(candidates, feasible, boundary, rng);
    REQUIRE(prov == Provenance::Imputed);
    if (value == 1.6) {
      ++picked_16;
    } else {
      REQUIRE(value == 2.0);
      ++picked_20;
    }
  }
  REQUIRE(picked_16 + picked_20 == 4000);
  REQUIRE(std::abs(picked_16 - 2000) < 150);
}

TEST_CASE("imputation falls back to the boundary when nothing is feasible") {
  CensoredObservation obs;
  obs.delta = CensorType::Right;
  obs.upper = 5.0;
  const std::vector<double> candidates{1.0, 2.0, 4.9};
  Rng rng(1);
  const auto [value, prov] =
      impute_response(candidates, feasible_set(obs), boundary_value(obs), rng);
  REQUIRE(prov == Provenance::BoundaryFallback);
  REQUIRE(value == 5.0);
}

TEST_CASE("initialization requires uncensored observations") {
  std::vector<CensoredObservation> data;
  for (int i = 0; i < 10; ++i) {
    CensoredObservation obs;
    obs.x = {0.1 * i};
    obs.t = 1.0;
    obs.delta = CensorType::Right;
    obs.upper = 1.0;
    obs.y_true = 2.0;
    data.push_back(obs);
  }
  MlpSpec spec;
  spec.input_dim = 1;
  spec.hidden_widths = {4};
  TrainConfig train;
  train.epochs = 5;
  MlpLearner learner{spec, train};
  const LevelGrid grid = expectile_grid(3);
  REQUIRE_THROWS_WITH(initialize(learner, data, grid, 1),
                      Catch::Matchers::ContainsSubstring("initialization impossible"));

  // a handful of uncensored rows trains, but warns
  for (int i = 0; i < 5; ++i) {
    CensoredObservation obs;
    obs.x = {0.2 * i};
    obs.t = 0.5 + 0.1 * i;
    obs.y_true = obs.t;
    data.push_back(obs);
  }
  std::vector<std::string> warnings;
  const auto bank = initialize(learner, data, grid, 1, 1, &warnings);
  REQUIRE(bank.models.size() == 3);
  REQUIRE(bank.grid_indices == std::vector<int>{1, 2, 3});
  REQUIRE_FALSE(warnings.empty());
}

TEST_CASE("augmentation passes uncensored rows through and respects feasibility") {
  const auto data = scenario_data(CensorType::Right, 150, 77);
  DaernnConfig cfg = small_config(5, 1);
  cfg.spec.input_dim = 2;
  MlpLearner learner{cfg.spec, cfg.train};
  const LevelGrid grid = expectile_grid(5);
  const auto bank = initialize(learner, data, grid, cfg.train.seed);

  Rng rng(9);
  const auto augmented = augment(learner, bank, data, rng);
  REQUIRE(augmented.responses.size() == data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& obs = data[i];
    switch (augmented.provenance[i]) {
      case Provenance::Observed:
        REQUIRE(obs.delta == CensorType::Uncensored);
        REQUIRE(augmented.responses[i] == obs.t);
        break;
      case Provenance::Imputed:
        REQUIRE(contains(feasible_set(obs), augmented.responses[i]));
        break;
      case Provenance::BoundaryFallback:
        REQUIRE(augmented.responses[i] == boundary_value(obs));
        break;
    }
  }
}

TEST_CASE("run is deterministic and averages its iterations") {
  const auto data = scenario_data(CensorType::Right, 160, 5);
  const auto [train_data, test_data] = train_test_split(data, 0.8, 3);
  std::vector<std::vector<double>> test_xs;
  for (const auto& obs : test_data) test_xs.push_back(obs.x);

  DaernnConfig cfg = small_config(9, 3);
  const auto a = run_daernn(train_data, test_xs, cfg);
  const auto b = run_daernn(train_data, test_xs, cfg);
  REQUIRE(matrices_equal(a.average, b.average));
  REQUIRE(a.per_iteration.size() == 3);

  // averaging identity
  for (int i = 0; i < a.average.rows; ++i) {
    for (int c = 0; c < a.average.cols; ++c) {
      double s = 0.0;
      for (const auto& m : a.per_iteration) s += m(i, c);
      REQUIRE(a.average(i, c) == Approx(s / 3.0).margin(1e-12));
    }
  }

  // H = 1 output equals the single iteration exactly
  DaernnConfig one = small_config(9, 1);
  const auto single = run_daernn(train_data, test_xs, one);
  REQUIRE(matrices_equal(single.average, single.per_iteration[0]));
}

TEST_CASE("imputation statistics are recorded per iteration") {
  const auto data = scenario_data(CensorType::Interval, 200, 21);
  const auto [train_data, test_data] = train_test_split(data, 0.8, 4);
  std::vector<std::vector<double>> test_xs;
  for (const auto& obs : test_data) test_xs.push_back(obs.x);

  const auto result = run_daernn(train_data, test_xs, small_config(9, 2));
  REQUIRE(result.imputation_counts.size() == 2);
  std::size_t censored = 0;
  for (const auto& obs : train_data) {
    if (obs.delta != CensorType::Uncensored) ++censored;
  }
  for (const auto& [imputed, fallback] : result.imputation_counts) {
    REQUIRE(imputed + fallback == censored);
  }
}

TEST_CASE("pipelines coincide bitwise on uncensored data") {
  const auto data = scenario_data(CensorType::Uncensored, 140, 8);
  const auto [train_data, test_data] = train_test_split(data, 0.8, 17);
  std::vector<std::vector<double>> test_xs;
  for (const auto& obs : test_data) test_xs.push_back(obs.x);

  DaernnConfig cfg = small_config(9, 2);
  const auto da = run_daernn(train_data, test_xs, cfg);
  const auto full = run_full(train_data, test_xs, cfg);
  const auto oracle = run_oracle(train_data, test_xs, cfg);

  REQUIRE(da.target_levels == full.target_levels);
  for (int i = 0; i < da.average.rows; ++i) {
    for (std::size_t ti = 0; ti < da.target_levels.size(); ++ti) {
      const double v = da.average_at(i, ti);
      REQUIRE(v == full.average_at(i, ti));
      REQUIRE(v == oracle.average_at(i, ti));
    }
  }
}

TEST_CASE("oracle pipeline demands the latent response") {
  auto data = scenario_data(CensorType::Right, 60, 2);
  for (auto& obs : data) obs.y_true.reset();
  std::vector<std::vector<double>> test_xs{{0.0, 0.0}};
  REQUIRE_THROWS_WITH(run_oracle(data, test_xs, small_config(5, 1)),
                      Catch::Matchers::ContainsSubstring("y_true"));
}

TEST_CASE("reporting levels map to nearest grid levels") {
  const auto data = scenario_data(CensorType::Right, 120, 13);
  std::vector<std::vector<double>> test_xs{{0.0, 0.0}};
  DaernnConfig cfg = small_config(9, 1);
  cfg.target_levels = {0.1, 0.5, 0.9};
  const auto result = run_daernn(data, test_xs, cfg);
  REQUIRE(result.grid_size == 9);
  REQUIRE(result.grid_indices.size() == 9);  // imputing pipeline stores the whole grid
  REQUIRE(result.stored_levels[0] == Approx(0.1));
  REQUIRE(result.target_columns == std::vector<int>{0, 4, 8});

  const auto full = run_full(data, test_xs, cfg);
  REQUIRE(full.grid_indices == std::vector<int>{1, 5, 9});  // only what the report needs
  REQUIRE(full.target_columns == std::vector<int>{0, 1, 2});
}

TEST_CASE("predicted expectiles are mostly ordered across levels") {
  const auto data = scenario_data(CensorType::Right, 1000, 99);
  const auto [train_data, test_data] = train_test_split(data, 0.8, 7);
  std::vector<std::vector<double>> test_xs;
  for (const auto& obs : test_data) test_xs.push_back(obs.x);

  DaernnConfig cfg;
  cfg.grid_size = 19;
  cfg.iterations = 2;
  cfg.target_levels = {0.1, 0.5, 0.9};
  cfg.spec.hidden_widths = {16};
  cfg.spec.dropout_rate = 0.1;
  cfg.train.learning_rate = 0.05;
  cfg.train.epochs = 60;
  cfg.train.batch_size = 128;
  cfg.train.seed = 2025;
  const auto result = run_daernn(train_data, test_xs, cfg);

  int ordered = 0;
  for (int i = 0; i < result.average.rows; ++i) {
    const double lo = result.average_at(i, 0);
    const double mid = result.average_at(i, 1);
    const double hi = result.average_at(i, 2);
    if (lo <= mid && mid <= hi) ++ordered;
  }
  REQUIRE(static_cast<double>(ordered) / result.average.rows > 0.9);
}

TEST_CASE("warm start is available and deterministic") {
  const auto data = scenario_data(CensorType::Right, 150, 44);
  std::vector<std::vector<double>> test_xs{{0.1, -0.2}, {0.0, 0.0}};
  DaernnConfig cfg = small_config(7, 2);
  cfg.warm_start = true;
  const auto a = run_daernn(data, test_xs, cfg);
  const auto b = run_daernn(data, test_xs, cfg);
  REQUIRE(matrices_equal(a.average, b.average));
  cfg.warm_start = false;
  const auto cold = run_daernn(data, test_xs, cfg);
  REQUIRE_FALSE(matrices_equal(a.average, cold.average));
}
