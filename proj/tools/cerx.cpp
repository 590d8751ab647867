// cerx command-line tool: synthetic data generation, censoring injection,
// fitting and prediction, hyperparameter tuning, and replication benchmarks.
// Every subcommand is reproducible byte for byte from its inputs and seed.
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cerx/baselines.hpp"
#include "cerx/daernn.hpp"
#include "cerx/harness.hpp"
#include "cerx/io.hpp"
#include "cerx/metrics.hpp"
#include "cerx/simgen.hpp"

namespace {

using nlohmann::json;
using namespace cerx;

constexpr int kExitConfig = 2;
constexpr int kExitSchema = 3;
constexpr int kExitNumeric = 4;
constexpr int kExitIo = 5;

struct ScenarioFlags {
  std::string model = "m1";
  std::string error = "normal";
  std::string censoring = "right";
  double rate = 0.25;
  std::size_t n = 1000;

  ScenarioSpec to_spec(std::uint64_t seed) const {
    ScenarioSpec spec;
    spec.model = model == "m1" ? SimModel::Model1 : SimModel::Model2;
    spec.error = error == "normal" ? ErrorLaw::StdNormal : ErrorLaw::StudentT3;
    if (censoring == "right") spec.censor_kind = CensorType::Right;
    else if (censoring == "left") spec.censor_kind = CensorType::Left;
    else if (censoring == "interval") spec.censor_kind = CensorType::Interval;
    else spec.censor_kind = CensorType::Uncensored;
    spec.target_rate = rate;
    spec.n = n;
    spec.seed = seed;
    return spec;
  }

  void attach(CLI::App* cmd) {
    cmd->add_option("--model", model, "Scenario model")
        ->check(CLI::IsMember({"m1", "m2"}))
        ->capture_default_str();
    cmd->add_option("--error", error, "Error law")
        ->check(CLI::IsMember({"normal", "t3"}))
        ->capture_default_str();
    cmd->add_option("--censoring", censoring, "Censoring kind")
        ->check(CLI::IsMember({"right", "left", "interval", "none"}))
        ->capture_default_str();
    cmd->add_option("--rate", rate, "Target censoring rate")
        ->check(CLI::IsMember(std::vector<double>{0.25, 0.5}))
        ->capture_default_str();
    cmd->add_option("--n", n, "Sample size")->capture_default_str();
  }
};

struct FitFlags {
  int grid_size = 0;
  int iterations = 5;
  std::vector<double> levels{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  int layers = 3;
  int nodes = 32;
  std::string activation = "relu";
  double learning_rate = 0.1;
  double dropout = 0.2;
  int epochs = 100;
  int batch = 128;
  bool warm_start = false;
  int jobs = 1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--grid-size", grid_size,
                    "Imputation grid size m (0 = max(floor(sqrt(n)), 99))")
        ->capture_default_str();
    cmd->add_option("--iterations", iterations, "Augmentation iterations H")
        ->capture_default_str();
    cmd->add_option("--levels", levels, "Reporting expectile levels")
        ->delimiter(',')
        ->capture_default_str();
    cmd->add_option("--layers", layers, "Hidden layers")->capture_default_str();
    cmd->add_option("--nodes", nodes, "Nodes per hidden layer")->capture_default_str();
    cmd->add_option("--activation", activation, "Hidden activation")
        ->check(CLI::IsMember({"relu", "sigmoid"}))
        ->capture_default_str();
    cmd->add_option("--learning-rate", learning_rate, "MBGD learning rate")
        ->capture_default_str();
    cmd->add_option("--dropout", dropout, "Dropout rate")->capture_default_str();
    cmd->add_option("--epochs", epochs, "Training epochs")->capture_default_str();
    cmd->add_option("--batch", batch, "Mini-batch size")->capture_default_str();
    cmd->add_flag("--warm-start", warm_start,
                  "Initialize each iteration's models from the previous bank");
    cmd->add_option("--jobs", jobs, "Parallel fits across grid levels")
        ->capture_default_str();
  }

  DaernnConfig to_config(std::uint64_t seed) const {
    DaernnConfig cfg;
    cfg.grid_size = grid_size;
    cfg.iterations = iterations;
    cfg.target_levels = levels;
    cfg.spec.hidden_widths.assign(static_cast<std::size_t>(layers), nodes);
    cfg.spec.activation = activation == "relu" ? Activation::ReLU : Activation::Sigmoid;
    cfg.spec.dropout_rate = dropout;
    cfg.train.learning_rate = learning_rate;
    cfg.train.epochs = epochs;
    cfg.train.batch_size = batch;
    cfg.train.seed = seed;
    cfg.warm_start = warm_start;
    cfg.jobs = jobs;
    return cfg;
  }

  json to_json() const {
    return json{{"layers", layers},
                {"nodes", nodes},
                {"activation", activation},
                {"learning_rate", learning_rate},
                {"dropout", dropout},
                {"epochs", epochs},
                {"batch", batch}};
  }
};

// "normal:MEAN:SD", "exp:MEAN", or "fixed:VALUE"
BoundDistribution parse_bound(const std::string& text) {
  const auto first = text.find(':');
  if (first == std::string::npos) {
    throw CLI::ValidationError("--bound", "expected dist:params, got '" + text + "'");
  }
  const std::string dist = text.substr(0, first);
  const std::string rest = text.substr(first + 1);
  try {
    if (dist == "normal") {
      const auto second = rest.find(':');
      if (second == std::string::npos) {
        throw CLI::ValidationError("--bound", "normal needs mean:sd");
      }
      return BoundDistribution::normal(std::stod(rest.substr(0, second)),
                                       std::stod(rest.substr(second + 1)));
    }
    if (dist == "exp") return BoundDistribution::exponential(std::stod(rest));
    if (dist == "fixed") return BoundDistribution::fixed(std::stod(rest));
  } catch (const std::invalid_argument&) {
    throw CLI::ValidationError("--bound", "bad numeric parameter in '" + text + "'");
  }
  throw CLI::ValidationError("--bound", "unknown distribution '" + dist + "'");
}

json level_mapping_json(const ExpectilePredictionSet& preds) {
  json levels = json::array();
  for (std::size_t ti = 0; ti < preds.target_levels.size(); ++ti) {
    const int column = preds.target_columns[ti];
    levels.push_back(json{{"target", preds.target_levels[ti]},
                          {"grid_index", preds.grid_indices[static_cast<std::size_t>(column)]},
                          {"grid_tau", preds.stored_levels[static_cast<std::size_t>(column)]}});
  }
  return levels;
}

int cmd_simulate(const ScenarioFlags& scenario, std::uint64_t seed,
                 const std::string& out) {
  const auto data = gen_scenario(scenario.to_spec(seed));
  write_observations(out, data);
  std::cout << "wrote " << data.size() << " observations to " << out
            << "\nrealized censoring rate: " << format_double(censored_fraction(data))
            << "\n";
  return 0;
}

int cmd_inject(const std::string& input, const std::string& response,
               const std::string& kind, const std::string& lower,
               const std::string& upper, std::uint64_t seed,
               const std::string& out) {
  const XYData data = read_xy(input, response);
  InjectionScheme scheme;
  if (kind == "right") scheme.kind = CensorType::Right;
  else if (kind == "left") scheme.kind = CensorType::Left;
  else scheme.kind = CensorType::Interval;
  if (scheme.kind != CensorType::Left) {
    if (upper.empty()) throw CLI::ValidationError("--upper", "required for this kind");
    scheme.upper = parse_bound(upper);
  }
  if (scheme.kind != CensorType::Right) {
    if (lower.empty()) throw CLI::ValidationError("--lower", "required for this kind");
    scheme.lower = parse_bound(lower);
  }
  const auto result = inject_censoring(data, scheme, seed);
  write_observations(out, result.observations);
  std::cout << "wrote " << result.observations.size() << " observations to " << out
            << "\nachieved censoring rate: " << format_double(result.achieved_rate)
            << "\n";
  return 0;
}

int cmd_fit(const std::string& train_path, const std::string& test_path,
            const std::string& method_name_str, const FitFlags& flags,
            std::uint64_t seed, const std::string& out,
            const std::string& detail_path, const std::string& model_out) {
  const auto method = parse_method(method_name_str);
  if (!method) throw CLI::ValidationError("--method", "unknown method " + method_name_str);

  const ObservationFile train_file = read_observations(train_path);
  const auto test_xs = read_covariates(test_path, train_file.covariate_names);
  DaernnConfig cfg = flags.to_config(seed);
  cfg.spec.input_dim = static_cast<int>(train_file.covariate_names.size());

  ExpectilePredictionSet preds;
  SavedModelBank bank_file;
  const bool want_banks = !model_out.empty();
  std::vector<ModelBank<MlpParams>> mlp_banks;
  std::vector<ModelBank<LinearExpectileModel>> linear_banks;
  switch (*method) {
    case Method::Daernn:
      preds = run_daernn(train_file.observations, test_xs, cfg,
                         want_banks ? &mlp_banks : nullptr);
      break;
    case Method::Full:
      preds = run_full(train_file.observations, test_xs, cfg,
                       want_banks ? &mlp_banks : nullptr);
      break;
    case Method::Oracle:
      preds = run_oracle(train_file.observations, test_xs, cfg,
                         want_banks ? &mlp_banks : nullptr);
      break;
    case Method::DaLinear:
      preds = run_dalinear(train_file.observations, test_xs, cfg,
                           want_banks ? &linear_banks : nullptr);
      break;
  }

  write_predictions(out, preds);
  if (!detail_path.empty()) write_prediction_detail(detail_path, preds);
  if (want_banks) {
    bank_file.grid_size = preds.grid_size;
    bank_file.grid_indices = preds.grid_indices;
    bank_file.target_levels = preds.target_levels;
    if (*method == Method::DaLinear) {
      bank_file.method_tag = 1;
      for (auto& b : linear_banks) bank_file.linear_banks.push_back(std::move(b.models));
    } else {
      bank_file.method_tag = 0;
      bank_file.spec = cfg.spec;
      for (auto& b : mlp_banks) bank_file.mlp_banks.push_back(std::move(b.models));
    }
    save_model_bank(model_out, bank_file);
  }

  // metadata sidecar
  json meta{{"method", method_name_str},
            {"m", preds.grid_size},
            {"H", flags.iterations},
            {"seed", seed},
            {"warm_start", flags.warm_start},
            {"n_train", train_file.observations.size()},
            {"n_test", test_xs.size()},
            {"levels", level_mapping_json(preds)},
            {"covariates", train_file.covariate_names}};
  if (*method != Method::DaLinear) meta["hyperparameters"] = flags.to_json();
  json censored{{"none", 0}, {"right", 0}, {"left", 0}, {"interval", 0}};
  for (const auto& obs : train_file.observations) {
    censored[censor_type_name(obs.delta)] = censored[censor_type_name(obs.delta)].get<int>() + 1;
  }
  meta["train_censoring"] = censored;
  if (!preds.imputation_counts.empty()) {
    json imput = json::array();
    for (const auto& [imputed, fallback] : preds.imputation_counts) {
      imput.push_back(json{{"imputed", imputed}, {"boundary_fallback", fallback}});
    }
    meta["imputation"] = imput;
  }
  if (!preds.warnings.empty()) meta["warnings"] = preds.warnings;
  std::ofstream mout(out + ".meta.json", std::ios::binary);
  if (!mout) throw io_error("cannot open for writing: " + out + ".meta.json");
  mout << meta.dump(2) << '\n';

  for (const auto& warning : preds.warnings) std::cerr << "warning: " << warning << "\n";
  std::cout << "wrote predictions for " << test_xs.size() << " rows to " << out << "\n";
  return 0;
}

int cmd_predict(const std::string& model_path, const std::string& test_path,
                const std::string& out, const std::string& detail_path) {
  const SavedModelBank bank = load_model_bank(model_path);
  const int p = bank.method_tag == 0
                    ? bank.spec.input_dim
                    : (bank.linear_banks.empty() || bank.linear_banks[0].empty()
                           ? 0
                           : static_cast<int>(bank.linear_banks[0][0].beta.size()) - 1);
  std::vector<std::string> names;
  for (int j = 1; j <= p; ++j) names.push_back("x" + std::to_string(j));
  const auto test_xs = read_covariates(test_path, names);
  const auto preds = predict_from_bank(bank, test_xs);
  write_predictions(out, preds);
  if (!detail_path.empty()) write_prediction_detail(detail_path, preds);
  std::cout << "wrote predictions for " << test_xs.size() << " rows to " << out << "\n";
  return 0;
}

int cmd_tune(const std::string& input, double tau, int folds, std::uint64_t seed,
             const HyperGrid& grid, int jobs, const std::string& out) {
  const ObservationFile file = read_observations(input);
  std::vector<std::vector<double>> xs;
  std::vector<double> ys;
  for (const auto& obs : file.observations) {
    if (obs.delta == CensorType::Uncensored) {
      xs.push_back(obs.x);
      ys.push_back(obs.t);
    }
  }
  std::cout << "tuning on " << xs.size() << " uncensored rows\n";
  const auto result = grid_search_cv(xs, ys, grid, folds, ExpectileLevel(tau), seed, jobs);
  if (!out.empty()) {
    std::ofstream cv(out, std::ios::binary);
    if (!cv) throw io_error("cannot open for writing: " + out);
    cv << "layers,nodes,learning_rate,dropout,epochs,batch,cv_loss\n";
    for (const auto& entry : result.table) {
      cv << entry.point.layers << ',' << entry.point.nodes << ','
         << format_double(entry.point.learning_rate) << ','
         << format_double(entry.point.dropout) << ',' << entry.point.epochs << ','
         << entry.point.batch << ','
         << (std::isinf(entry.cv_loss) ? "inf" : format_double(entry.cv_loss)) << '\n';
    }
  }
  std::cout << "best: layers=" << result.best.layers << " nodes=" << result.best.nodes
            << " learning_rate=" << format_double(result.best.learning_rate)
            << " dropout=" << format_double(result.best.dropout)
            << " epochs=" << result.best.epochs << " batch=" << result.best.batch
            << " cv_loss=" << format_double(result.best_loss) << "\n";
  return 0;
}

int cmd_benchmark(const ScenarioFlags& scenario, const std::string& methods_str,
                  int reps, std::uint64_t seed, const FitFlags& flags, bool tune,
                  const HyperGrid& grid, int jobs, bool timing,
                  const std::string& out, const std::string& detail_path) {
  BenchmarkConfig cfg;
  cfg.scenario = scenario.to_spec(0);
  cfg.replications = reps;
  cfg.base_seed = seed;
  cfg.jobs = jobs;
  cfg.daernn = flags.to_config(0);
  cfg.methods.clear();
  std::stringstream ss(methods_str);
  std::string token;
  while (std::getline(ss, token, ',')) {
    const auto m = parse_method(token);
    if (!m) throw CLI::ValidationError("--methods", "unknown method " + token);
    cfg.methods.push_back(*m);
  }

  if (tune) {
    // One pre-tuning pass on the uncensored rows of a tuning replication's
    // training split; the selected configuration is reused everywhere.
    ScenarioSpec tune_spec = cfg.scenario;
    tune_spec.seed = derive_seed(seed, stream::kCv);
    const auto data = gen_scenario(tune_spec);
    const auto [train_data, test_data] =
        train_test_split(data, cfg.split_fraction, derive_seed(tune_spec.seed, stream::kSplit));
    std::vector<std::vector<double>> xs;
    std::vector<double> ys;
    for (const auto& obs : train_data) {
      if (obs.delta == CensorType::Uncensored) {
        xs.push_back(obs.x);
        ys.push_back(obs.t);
      }
    }
    std::cout << "pre-tuning on " << xs.size() << " uncensored rows\n" << std::flush;
    const auto cv = grid_search_cv(xs, ys, grid, 5, ExpectileLevel(0.5),
                                   derive_seed(seed, stream::kCv, 1), jobs);
    cfg.daernn.spec.hidden_widths.assign(static_cast<std::size_t>(cv.best.layers),
                                         cv.best.nodes);
    cfg.daernn.spec.dropout_rate = cv.best.dropout;
    cfg.daernn.train.learning_rate = cv.best.learning_rate;
    cfg.daernn.train.epochs = cv.best.epochs;
    cfg.daernn.train.batch_size = cv.best.batch;
    std::cout << "tuned: layers=" << cv.best.layers << " nodes=" << cv.best.nodes
              << " learning_rate=" << format_double(cv.best.learning_rate)
              << " dropout=" << format_double(cv.best.dropout)
              << " epochs=" << cv.best.epochs << " batch=" << cv.best.batch << "\n";
  }

  const auto summary = run_replications(cfg);
  write_summary(out, summary, timing);
  if (!detail_path.empty()) write_replication_detail(detail_path, summary);

  for (const auto& ms : summary.methods) {
    std::cout << method_name(ms.method) << ": completed " << ms.completed << "/"
              << summary.replications << ", mean seconds "
              << format_double(ms.mean_seconds);
    if (ms.failures > 0) std::cout << ", failures " << ms.failures;
    std::cout << "\n";
  }
  std::cout << "wrote summary to " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"censored expectile regression toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand
  app.set_config("--config", "", "Read options from an INI file (flags override)");
  app.allow_config_extras(CLI::config_extras_mode::error);  // unknown keys are rejected

  std::uint64_t seed = 1;
  app.add_option("--seed", seed, "Base random seed")
      ->envname("CERX_SEED")
      ->capture_default_str();

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic censored dataset");
  ScenarioFlags sim_scenario;
  sim_scenario.attach(simulate);
  std::string sim_out = "data.csv";
  simulate->add_option("--out", sim_out, "Output CSV path")->capture_default_str();

  // inject
  auto* inject = app.add_subcommand("inject", "Censor an uncensored CSV dataset");
  std::string inj_input, inj_response = "y", inj_kind = "right";
  std::string inj_lower, inj_upper, inj_out = "censored.csv";
  inject->add_option("--input", inj_input, "Input CSV with covariates and a response")
      ->required();
  inject->add_option("--response", inj_response, "Response column name")
      ->capture_default_str();
  inject->add_option("--kind", inj_kind, "Censoring kind")
      ->check(CLI::IsMember({"right", "left", "interval"}))
      ->capture_default_str();
  inject->add_option("--lower", inj_lower,
                     "Lower-bound distribution (normal:MEAN:SD | exp:MEAN | fixed:VALUE)");
  inject->add_option("--upper", inj_upper, "Upper-bound distribution");
  inject->add_option("--out", inj_out, "Output CSV path")->capture_default_str();

  // fit
  auto* fit = app.add_subcommand("fit", "Fit a method and predict on a test set");
  std::string fit_train, fit_test, fit_method = "daernn";
  std::string fit_out = "predictions.csv", fit_detail, fit_model_out;
  FitFlags fit_flags;
  fit->add_option("--train", fit_train, "Training observation CSV")->required();
  fit->add_option("--test", fit_test, "Test CSV with matching covariate columns")
      ->required();
  fit->add_option("--method", fit_method, "Estimator")
      ->check(CLI::IsMember({"daernn", "full", "oracle", "dalinear"}))
      ->capture_default_str();
  fit_flags.attach(fit);
  fit->add_option("--out", fit_out, "Predictions CSV path")->capture_default_str();
  fit->add_option("--detail", fit_detail, "Per-iteration predictions CSV path");
  fit->add_option("--save-model", fit_model_out, "Save the fitted model bank");

  // predict
  auto* predict_cmd = app.add_subcommand("predict", "Predict from a saved model bank");
  std::string pred_model, pred_test, pred_out = "predictions.csv", pred_detail;
  predict_cmd->add_option("--model", pred_model, "Model bank file")->required();
  predict_cmd->add_option("--test", pred_test, "Test covariate CSV")->required();
  predict_cmd->add_option("--out", pred_out, "Predictions CSV path")->capture_default_str();
  predict_cmd->add_option("--detail", pred_detail, "Per-iteration predictions CSV path");

  // tune
  auto* tune = app.add_subcommand("tune", "Grid-search cross-validation on uncensored rows");
  std::string tune_input, tune_out;
  double tune_tau = 0.5;
  int tune_folds = 5, tune_jobs = 1;
  HyperGrid tune_grid;
  tune->add_option("--input", tune_input, "Observation CSV")->required();
  tune->add_option("--tau", tune_tau, "Expectile level to tune at")->capture_default_str();
  tune->add_option("--folds", tune_folds, "Cross-validation folds")->capture_default_str();
  tune->add_option("--jobs", tune_jobs, "Parallel grid evaluations")->capture_default_str();
  tune->add_option("--out", tune_out, "CV table CSV path");
  tune->add_option("--grid-layers", tune_grid.layers, "Hidden-layer counts")->delimiter(',');
  tune->add_option("--grid-nodes", tune_grid.nodes, "Nodes per layer")->delimiter(',');
  tune->add_option("--grid-learning-rates", tune_grid.learning_rates, "Learning rates")
      ->delimiter(',');
  tune->add_option("--grid-dropouts", tune_grid.dropouts, "Dropout rates")->delimiter(',');
  tune->add_option("--grid-epochs", tune_grid.epochs, "Epoch counts")->delimiter(',');
  tune->add_option("--grid-batches", tune_grid.batch_sizes, "Batch sizes")->delimiter(',');

  // benchmark
  auto* benchmark = app.add_subcommand("benchmark", "Replication study on a scenario");
  ScenarioFlags bench_scenario;
  bench_scenario.attach(benchmark);
  FitFlags bench_flags;
  bench_flags.attach(benchmark);
  std::string bench_methods = "daernn,full";
  std::string bench_out = "summary.csv", bench_detail;
  int bench_reps = 20, bench_jobs = 1;
  bool bench_tune = false, bench_timing = false;
  HyperGrid bench_grid;
  benchmark->add_option("--methods", bench_methods, "Comma-separated method list")
      ->capture_default_str();
  benchmark->add_option("--reps", bench_reps, "Replication count")->capture_default_str();
  benchmark->add_option("--bench-jobs", bench_jobs, "Parallel replications")
      ->capture_default_str();
  benchmark->add_flag("--tune", bench_tune, "Pre-tune hyperparameters once by 5-fold CV");
  benchmark->add_flag("--timing", bench_timing,
                      "Record wall-clock seconds in the summary CSV (breaks byte "
                      "reproducibility across runs)");
  benchmark->add_option("--out", bench_out, "Summary CSV path")->capture_default_str();
  benchmark->add_option("--details", bench_detail, "Per-replication CSV path");
  benchmark->add_option("--grid-layers", bench_grid.layers, "Tuning grid: layers")
      ->delimiter(',');
  benchmark->add_option("--grid-nodes", bench_grid.nodes, "Tuning grid: nodes")->delimiter(',');
  benchmark->add_option("--grid-learning-rates", bench_grid.learning_rates,
                        "Tuning grid: learning rates")
      ->delimiter(',');
  benchmark->add_option("--grid-dropouts", bench_grid.dropouts, "Tuning grid: dropouts")
      ->delimiter(',');
  benchmark->add_option("--grid-epochs", bench_grid.epochs, "Tuning grid: epochs")
      ->delimiter(',');
  benchmark->add_option("--grid-batches", bench_grid.batch_sizes, "Tuning grid: batches")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim_scenario, seed, sim_out);
    if (inject->parsed()) {
      return cmd_inject(inj_input, inj_response, inj_kind, inj_lower, inj_upper, seed,
                        inj_out);
    }
    if (fit->parsed()) {
      return cmd_fit(fit_train, fit_test, fit_method, fit_flags, seed, fit_out,
                     fit_detail, fit_model_out);
    }
    if (predict_cmd->parsed()) {
      return cmd_predict(pred_model, pred_test, pred_out, pred_detail);
    }
    if (tune->parsed()) {
      return cmd_tune(tune_input, tune_tau, tune_folds, seed, tune_grid, tune_jobs,
                      tune_out);
    }
    if (benchmark->parsed()) {
      return cmd_benchmark(bench_scenario, bench_methods, bench_reps, seed, bench_flags,
                           bench_tune, bench_grid, bench_jobs, bench_timing, bench_out,
                           bench_detail);
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  } catch (const schema_error& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const train_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const io_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
