#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cerx/baselines.hpp"
#include "cerx/metrics.hpp"
#include "cerx/simgen.hpp"

using namespace cerx;
using Catch::Approx;

namespace {

bool params_equal(const MlpParams& a, const MlpParams& b) {
  for (std::size_t l = 0; l < a.layer_count(); ++l) {
    if (a.weights[l].data != b.weights[l].data) return false;
    if (a.biases[l] != b.biases[l]) return false;
  }
  return a.layer_count() == b.layer_count();
}

}  // namespace

TEST_CASE("full and oracle coincide on uncensored data and are deterministic") {
  ScenarioSpec scen;
  scen.censor_kind = CensorType::Uncensored;
  scen.n = 120;
  scen.seed = 60;
  const auto data = gen_scenario(scen);

  MlpSpec spec;
  spec.input_dim = 2;
  spec.hidden_widths = {8};
  TrainConfig cfg;
  cfg.learning_rate = 0.05;
  cfg.epochs = 25;
  cfg.batch_size = 32;
  cfg.seed = 5;

  const auto full = train_full(data, spec, cfg, ExpectileLevel(0.5));
  const auto oracle = train_oracle(data, spec, cfg, ExpectileLevel(0.5));
  REQUIRE(params_equal(full, oracle));
  REQUIRE(params_equal(full, train_full(data, spec, cfg, ExpectileLevel(0.5))));
}

TEST_CASE("ignoring heavy right censoring biases the fit low") {
  ScenarioSpec scen;
  scen.model = SimModel::Model1;
  scen.censor_kind = CensorType::Right;
  scen.target_rate = 0.50;
  scen.n = 600;
  scen.seed = 61;
  const auto data = gen_scenario(scen);

  MlpSpec spec;
  spec.input_dim = 2;
  spec.hidden_widths = {16};
  TrainConfig cfg;
  cfg.learning_rate = 0.05;
  cfg.epochs = 80;
  cfg.batch_size = 64;
  cfg.seed = 9;

  const auto full = train_full(data, spec, cfg, ExpectileLevel(0.5));
  const auto oracle = train_oracle(data, spec, cfg, ExpectileLevel(0.5));

  std::vector<std::vector<double>> xs;
  std::vector<double> y_true;
  for (const auto& obs : data) {
    xs.push_back(obs.x);
    y_true.push_back(*obs.y_true);
  }
  const auto full_preds = predict(spec, full, xs);
  const auto oracle_preds = predict(spec, oracle, xs);
  double full_mean = 0.0, oracle_mean = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    full_mean += full_preds[i];
    oracle_mean += oracle_preds[i];
  }
  REQUIRE(full_mean < oracle_mean);  // censoring pulls the surface down
  REQUIRE(expectile_loss_metric(y_true, oracle_preds, ExpectileLevel(0.5)) <
          expectile_loss_metric(y_true, full_preds, ExpectileLevel(0.5)));
}

TEST_CASE("oracle training requires the latent response") {
  ScenarioSpec scen;
  scen.censor_kind = CensorType::Right;
  scen.n = 50;
  scen.seed = 3;
  auto data = gen_scenario(scen);
  for (auto& obs : data) obs.y_true.reset();
  MlpSpec spec;
  spec.input_dim = 2;
  spec.hidden_widths = {4};
  TrainConfig cfg;
  cfg.epochs = 2;
  REQUIRE_THROWS_WITH(train_oracle(data, spec, cfg, ExpectileLevel(0.5)),
                      Catch::Matchers::ContainsSubstring("y_true"));
}

TEST_CASE("dalinear with no censoring reduces to one linear fit per level") {
  ScenarioSpec scen;
  scen.censor_kind = CensorType::Uncensored;
  scen.n = 90;
  scen.seed = 44;
  const auto data = gen_scenario(scen);
  std::vector<std::vector<double>> test_xs{{0.2, -0.4}, {0.0, 0.0}, {-0.3, 0.5}};

  DaernnConfig cfg;
  cfg.grid_size = 9;
  cfg.iterations = 3;
  cfg.target_levels = {0.3, 0.7};
  const auto preds = run_dalinear(data, test_xs, cfg);

  std::vector<std::vector<double>> xs;
  std::vector<double> ys;
  for (const auto& obs : data) {
    xs.push_back(obs.x);
    ys.push_back(obs.t);
  }
  for (std::size_t ti = 0; ti < cfg.target_levels.size(); ++ti) {
    const auto single =
        linear_expectile_fit(xs, ys, ExpectileLevel(cfg.target_levels[ti]));
    for (std::size_t i = 0; i < test_xs.size(); ++i) {
      REQUIRE(preds.average_at(static_cast<int>(i), ti) ==
              Approx(linear_predict(single, test_xs[i])).margin(1e-12));
    }
  }
}

TEST_CASE("dalinear recovers a censored linear signal") {
  Rng rng(12);
  std::vector<CensoredObservation> data;
  std::vector<std::vector<double>> test_xs;
  std::vector<double> test_y;
  for (int i = 0; i < 400; ++i) {
    const double x = rng.uniform(-1.0, 1.0);
    const double y = 1.0 + 2.0 * x + 0.3 * rng.normal();
    BoundScheme rule{CensorType::Right, std::nullopt, rng.normal(1.8, 1.0)};
    auto obs = apply_censoring(y, rule);
    obs.x = {x};
    data.push_back(std::move(obs));
  }
  for (int i = 0; i < 100; ++i) {
    const double x = rng.uniform(-1.0, 1.0);
    test_xs.push_back({x});
    test_y.push_back(1.0 + 2.0 * x + 0.3 * rng.normal());
  }

  DaernnConfig cfg;
  cfg.grid_size = 19;
  cfg.iterations = 3;
  cfg.target_levels = {0.5};
  const auto preds = run_dalinear(data, test_xs, cfg);
  const double el = expectile_loss_metric(test_y, preds.average_column(0),
                                          ExpectileLevel(0.5));

  // reference: a plain linear fit on the latent responses
  std::vector<std::vector<double>> xs;
  std::vector<double> ys;
  for (const auto& obs : data) {
    xs.push_back(obs.x);
    ys.push_back(*obs.y_true);
  }
  const auto oracle_fit = linear_expectile_fit(xs, ys, ExpectileLevel(0.5));
  std::vector<double> oracle_preds;
  for (const auto& x : test_xs) oracle_preds.push_back(linear_predict(oracle_fit, x));
  const double oracle_el =
      expectile_loss_metric(test_y, oracle_preds, ExpectileLevel(0.5));
  REQUIRE(el / oracle_el < 1.3);
}
