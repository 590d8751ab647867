// Replication runner: generates a scenario per replication, splits 80/20,
// fits the requested methods with matched derived seeds, and aggregates
// expectile losses and loss ratios across replications. Replications can
// run in parallel; aggregation folds results in replication order, so the
// summary does not depend on the number of jobs.
#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cerx/baselines.hpp"
#include "cerx/daernn.hpp"
#include "cerx/metrics.hpp"
#include "cerx/parallel.hpp"
#include "cerx/simgen.hpp"

namespace cerx {

enum class Method { Daernn, Full, Oracle, DaLinear };

inline std::string method_name(Method m) {
  switch (m) {
    case Method::Daernn: return "daernn";
    case Method::Full: return "full";
    case Method::Oracle: return "oracle";
    case Method::DaLinear: return "dalinear";
  }
  return "unknown";
}

inline std::optional<Method> parse_method(const std::string& name) {
  if (name == "daernn") return Method::Daernn;
  if (name == "full") return Method::Full;
  if (name == "oracle") return Method::Oracle;
  if (name == "dalinear") return Method::DaLinear;
  return std::nullopt;
}

struct BenchmarkConfig {
  ScenarioSpec scenario;
  std::vector<Method> methods{Method::Daernn, Method::Full};
  int replications = 20;
  std::uint64_t base_seed = 1;
  double split_fraction = 0.8;
  DaernnConfig daernn;  // shared fit configuration; train.seed is derived per replication
  int jobs = 1;

  void validate() const {
    if (replications < 1) throw std::domain_error("BenchmarkConfig: need at least one replication");
    if (methods.empty()) throw std::domain_error("BenchmarkConfig: no methods selected");
    daernn.validate();
  }
};

// One (replication, method) outcome.
struct ReplicationRecord {
  int replication = 0;
  Method method = Method::Daernn;
  bool ok = false;
  std::string error;
  std::vector<double> el;  // per reporting level
  double seconds = 0.0;
};

struct MethodSummary {
  Method method = Method::Daernn;
  std::vector<double> mean_el;         // per reporting level
  std::vector<double> mean_ratio;      // mean over replications of EL_daernn / EL_method
  int completed = 0;
  int failures = 0;
  int ratio_count = 0;  // replications where both this method and daernn succeeded
  double mean_seconds = 0.0;
};

struct ReplicationSummary {
  std::string scenario_id;
  std::vector<double> taus;
  std::vector<MethodSummary> methods;
  std::vector<ReplicationRecord> records;  // ordered by replication, then method
  int replications = 0;
};

inline ExpectilePredictionSet run_method(Method method,
                                         const std::vector<CensoredObservation>& train_data,
                                         const std::vector<std::vector<double>>& test_xs,
                                         const DaernnConfig& config) {
  switch (method) {
    case Method::Daernn: return run_daernn(train_data, test_xs, config);
    case Method::Full: return run_full(train_data, test_xs, config);
    case Method::Oracle: return run_oracle(train_data, test_xs, config);
    case Method::DaLinear: return run_dalinear(train_data, test_xs, config);
  }
  throw std::domain_error("run_method: unknown method");
}

inline ReplicationSummary run_replications(const BenchmarkConfig& config) {
  config.validate();
  const int R = config.replications;
  const std::size_t n_methods = config.methods.size();
  const std::vector<double>& taus = config.daernn.target_levels;

  std::vector<std::vector<ReplicationRecord>> per_rep(static_cast<std::size_t>(R));

  parallel_for(static_cast<std::size_t>(R), config.jobs, [&](std::size_t r) {
    const std::uint64_t rep_seed = config.base_seed + r + 1;
    ScenarioSpec scenario = config.scenario;
    scenario.seed = rep_seed;
    const auto data = gen_scenario(scenario);
    const auto [train_data, test_data] =
        train_test_split(data, config.split_fraction, derive_seed(rep_seed, stream::kSplit));

    std::vector<std::vector<double>> test_xs;
    std::vector<double> test_y;
    test_xs.reserve(test_data.size());
    test_y.reserve(test_data.size());
    for (const auto& obs : test_data) {
      test_xs.push_back(obs.x);
      if (!obs.y_true) throw std::domain_error("run_replications: test row lacks y_true");
      test_y.push_back(*obs.y_true);
    }

    DaernnConfig fit_cfg = config.daernn;
    fit_cfg.train.seed = derive_seed(rep_seed, stream::kFit);
    // Replications own the outer parallelism; per-level fits stay serial.
    if (config.jobs > 1) fit_cfg.jobs = 1;

    auto& records = per_rep[r];
    records.reserve(n_methods);
    for (Method method : config.methods) {
      ReplicationRecord rec;
      rec.replication = static_cast<int>(r) + 1;
      rec.method = method;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const ExpectilePredictionSet preds =
            run_method(method, train_data, test_xs, fit_cfg);
        for (std::size_t ti = 0; ti < taus.size(); ++ti) {
          rec.el.push_back(expectile_loss_metric(test_y, preds.average_column(ti),
                                                 ExpectileLevel(taus[ti])));
        }
        rec.ok = true;
      } catch (const std::exception& e) {
        rec.ok = false;
        rec.error = e.what();
      }
      rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      records.push_back(std::move(rec));
    }
  });

  ReplicationSummary summary;
  summary.scenario_id = config.scenario.id();
  summary.taus = taus;
  summary.replications = R;
  summary.methods.resize(n_methods);
  for (std::size_t mi = 0; mi < n_methods; ++mi) {
    summary.methods[mi].method = config.methods[mi];
    summary.methods[mi].mean_el.assign(taus.size(), 0.0);
    summary.methods[mi].mean_ratio.assign(taus.size(), 0.0);
  }

  // Which position daernn occupies, if requested; ratios need it.
  std::ptrdiff_t daernn_pos = -1;
  for (std::size_t mi = 0; mi < n_methods; ++mi) {
    if (config.methods[mi] == Method::Daernn) daernn_pos = static_cast<std::ptrdiff_t>(mi);
  }

  for (std::size_t r = 0; r < static_cast<std::size_t>(R); ++r) {
    const auto& records = per_rep[r];
    for (std::size_t mi = 0; mi < n_methods; ++mi) {
      const ReplicationRecord& rec = records[mi];
      MethodSummary& ms = summary.methods[mi];
      if (rec.ok) {
        ++ms.completed;
        ms.mean_seconds += rec.seconds;
        for (std::size_t ti = 0; ti < taus.size(); ++ti) ms.mean_el[ti] += rec.el[ti];
        if (daernn_pos >= 0 && records[static_cast<std::size_t>(daernn_pos)].ok) {
          ++ms.ratio_count;
          const auto& da = records[static_cast<std::size_t>(daernn_pos)];
          for (std::size_t ti = 0; ti < taus.size(); ++ti) {
            ms.mean_ratio[ti] += el_ratio(da.el[ti], rec.el[ti]);
          }
        }
      } else {
        ++ms.failures;
      }
    }
    for (const auto& rec : records) summary.records.push_back(rec);
  }

  for (auto& ms : summary.methods) {
    if (ms.completed > 0) {
      for (double& v : ms.mean_el) v /= ms.completed;
      ms.mean_seconds /= ms.completed;
    }
    if (ms.ratio_count > 0) {
      for (double& v : ms.mean_ratio) v /= ms.ratio_count;
    }
  }
  return summary;
}

}  // namespace cerx
