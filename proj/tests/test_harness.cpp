#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cerx/harness.hpp"

using namespace cerx;
using Catch::Approx;

namespace {

BenchmarkConfig tiny_benchmark(CensorType kind, int reps) {
  BenchmarkConfig cfg;
  cfg.scenario.model = SimModel::Model1;
  cfg.scenario.error = ErrorLaw::StdNormal;
  cfg.scenario.censor_kind = kind;
  cfg.scenario.target_rate = 0.25;
  cfg.scenario.n = 150;
  cfg.replications = reps;
  cfg.base_seed = 11;
  cfg.daernn.grid_size = 9;
  cfg.daernn.iterations = 2;
  cfg.daernn.target_levels = {0.3, 0.5, 0.7};
  cfg.daernn.spec.hidden_widths = {8};
  cfg.daernn.spec.dropout_rate = 0.1;
  cfg.daernn.train.learning_rate = 0.05;
  cfg.daernn.train.epochs = 30;
  cfg.daernn.train.batch_size = 64;
  return cfg;
}

}  // namespace

TEST_CASE("method names round trip") {
  for (Method m : {Method::Daernn, Method::Full, Method::Oracle, Method::DaLinear}) {
    REQUIRE(parse_method(method_name(m)) == m);
  }
  REQUIRE_FALSE(parse_method("wernn").has_value());
}

TEST_CASE("single oracle replication reproduces a direct run") {
  BenchmarkConfig cfg = tiny_benchmark(CensorType::Uncensored, 1);
  cfg.methods = {Method::Oracle};
  const auto summary = run_replications(cfg);
  REQUIRE(summary.methods.size() == 1);
  REQUIRE(summary.methods[0].completed == 1);
  REQUIRE(summary.methods[0].failures == 0);

  // recompute by hand with the same derived seeds
  ScenarioSpec scenario = cfg.scenario;
  scenario.seed = cfg.base_seed + 1;
  const auto data = gen_scenario(scenario);
  const auto [train_data, test_data] =
      train_test_split(data, 0.8, derive_seed(scenario.seed, stream::kSplit));
  std::vector<std::vector<double>> test_xs;
  std::vector<double> test_y;
  for (const auto& obs : test_data) {
    test_xs.push_back(obs.x);
    test_y.push_back(*obs.y_true);
  }
  DaernnConfig fit_cfg = cfg.daernn;
  fit_cfg.train.seed = derive_seed(scenario.seed, stream::kFit);
  const auto preds = run_oracle(train_data, test_xs, fit_cfg);
  for (std::size_t ti = 0; ti < summary.taus.size(); ++ti) {
    const double el = expectile_loss_metric(test_y, preds.average_column(ti),
                                            ExpectileLevel(summary.taus[ti]));
    REQUIRE(summary.methods[0].mean_el[ti] == el);
  }
}

TEST_CASE("summaries are reproducible and job-count independent") {
  BenchmarkConfig cfg = tiny_benchmark(CensorType::Right, 3);
  cfg.methods = {Method::Daernn, Method::Full};
  const auto a = run_replications(cfg);
  const auto b = run_replications(cfg);
  cfg.jobs = 2;
  const auto c = run_replications(cfg);
  for (std::size_t mi = 0; mi < a.methods.size(); ++mi) {
    REQUIRE(a.methods[mi].mean_el == b.methods[mi].mean_el);
    REQUIRE(a.methods[mi].mean_el == c.methods[mi].mean_el);
    REQUIRE(a.methods[mi].mean_ratio == c.methods[mi].mean_ratio);
  }
}

TEST_CASE("ratios compare each competitor against the estimator") {
  BenchmarkConfig cfg = tiny_benchmark(CensorType::Right, 2);
  cfg.methods = {Method::Daernn, Method::Full, Method::DaLinear};
  const auto summary = run_replications(cfg);
  REQUIRE(summary.methods[0].ratio_count == 2);
  for (std::size_t ti = 0; ti < summary.taus.size(); ++ti) {
    REQUIRE(summary.methods[0].mean_ratio[ti] == Approx(1.0));  // against itself
    REQUIRE(summary.methods[1].mean_ratio[ti] > 0.0);
  }
  // records: 2 replications x 3 methods, replication-major
  REQUIRE(summary.records.size() == 6);
  REQUIRE(summary.records[0].replication == 1);
  REQUIRE(summary.records[3].replication == 2);
}

TEST_CASE("failures are counted and excluded from the means") {
  BenchmarkConfig cfg = tiny_benchmark(CensorType::Right, 2);
  cfg.methods = {Method::Full};
  cfg.daernn.train.learning_rate = 1e12;  // guaranteed divergence
  const auto summary = run_replications(cfg);
  REQUIRE(summary.methods[0].failures == 2);
  REQUIRE(summary.methods[0].completed == 0);
  for (const auto& rec : summary.records) {
    REQUIRE_FALSE(rec.ok);
    REQUIRE_FALSE(rec.error.empty());
  }
}
