// File formats: the observation CSV (covariate columns, then t, delta, L,
// R, optional y_true), prediction CSVs, benchmark summaries, and binary
// snapshots of trained parameters and model banks. Doubles are written in
// the shortest representation that parses back to the same value, so
// re-emitting a file reproduces it byte for byte.
#pragma once

#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "cerx/censoring.hpp"
#include "cerx/daernn.hpp"
#include "cerx/errors.hpp"
#include "cerx/harness.hpp"
#include "cerx/linear_expectile.hpp"
#include "cerx/mlp.hpp"

namespace cerx {

inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& cell, const std::string& context) {
  double v = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw schema_error("cannot parse number '" + cell + "' in " + context);
  }
  return v;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  cells.push_back(cur);
  return cells;
}

struct ObservationFile {
  std::vector<CensoredObservation> observations;
  std::vector<std::string> covariate_names;
};

inline void write_observations(const std::string& path,
                               const std::vector<CensoredObservation>& data,
                               std::vector<std::string> covariate_names = {}) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open for writing: " + path);
  const std::size_t p = data.empty() ? 0 : data.front().x.size();
  if (covariate_names.empty()) {
    for (std::size_t j = 0; j < p; ++j) covariate_names.push_back("x" + std::to_string(j + 1));
  }
  bool any_true = false;
  for (const auto& obs : data) any_true = any_true || obs.y_true.has_value();
  for (std::size_t j = 0; j < p; ++j) out << covariate_names[j] << ',';
  out << "t,delta,L,R";
  if (any_true) out << ",y_true";
  out << '\n';
  for (const auto& obs : data) {
    for (std::size_t j = 0; j < p; ++j) out << format_double(obs.x[j]) << ',';
    out << format_double(obs.t) << ',' << static_cast<int>(obs.delta) << ',';
    if (obs.lower) out << format_double(*obs.lower);
    out << ',';
    if (obs.upper) out << format_double(*obs.upper);
    if (any_true) {
      out << ',';
      if (obs.y_true) out << format_double(*obs.y_true);
    }
    out << '\n';
  }
  if (!out) throw io_error("write failed: " + path);
}

inline ObservationFile read_observations(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw schema_error("empty file: " + path);
  const auto header = split_csv_line(line);

  ObservationFile file;
  std::ptrdiff_t col_t = -1, col_delta = -1, col_l = -1, col_r = -1, col_true = -1;
  std::vector<std::size_t> cov_cols;
  for (std::size_t j = 0; j < header.size(); ++j) {
    const std::string& name = header[j];
    if (name == "t") col_t = static_cast<std::ptrdiff_t>(j);
    else if (name == "delta") col_delta = static_cast<std::ptrdiff_t>(j);
    else if (name == "L") col_l = static_cast<std::ptrdiff_t>(j);
    else if (name == "R") col_r = static_cast<std::ptrdiff_t>(j);
    else if (name == "y_true") col_true = static_cast<std::ptrdiff_t>(j);
    else {
      cov_cols.push_back(j);
      file.covariate_names.push_back(name);
    }
  }
  if (col_t < 0) throw schema_error(path + ": missing column t");
  if (col_delta < 0) throw schema_error(path + ": missing column delta");

  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw schema_error(path + ": row " + std::to_string(row) + " has " +
                         std::to_string(cells.size()) + " cells, header has " +
                         std::to_string(header.size()));
    }
    const std::string ctx = path + " row " + std::to_string(row);
    CensoredObservation obs;
    for (std::size_t j : cov_cols) obs.x.push_back(parse_double(cells[j], ctx));
    obs.t = parse_double(cells[static_cast<std::size_t>(col_t)], ctx);
    const double dv = parse_double(cells[static_cast<std::size_t>(col_delta)], ctx);
    const int d = static_cast<int>(dv);
    if (d < 0 || d > 3 || static_cast<double>(d) != dv) {
      throw schema_error(ctx + ": delta must be 0, 1, 2, or 3");
    }
    obs.delta = static_cast<CensorType>(d);
    auto optional_cell = [&](std::ptrdiff_t col) -> std::optional<double> {
      if (col < 0) return std::nullopt;
      const std::string& cell = cells[static_cast<std::size_t>(col)];
      if (cell.empty()) return std::nullopt;
      return parse_double(cell, ctx);
    };
    obs.lower = optional_cell(col_l);
    obs.upper = optional_cell(col_r);
    obs.y_true = optional_cell(col_true);
    const bool need_l = obs.delta == CensorType::Left || obs.delta == CensorType::Interval;
    const bool need_r = obs.delta == CensorType::Right || obs.delta == CensorType::Interval;
    if (need_l && !obs.lower) throw schema_error(ctx + ": missing L for delta=" + std::to_string(d));
    if (need_r && !obs.upper) throw schema_error(ctx + ": missing R for delta=" + std::to_string(d));
    if (obs.delta == CensorType::Interval && !(*obs.lower < *obs.upper)) {
      throw schema_error(ctx + ": interval bounds must satisfy L < R");
    }
    if (obs.delta == CensorType::Uncensored) {
      obs.lower.reset();
      obs.upper.reset();
    }
    file.observations.push_back(std::move(obs));
  }
  return file;
}

// Plain regression table for censoring injection: covariates plus one
// response column.
inline XYData read_xy(const std::string& path, const std::string& response_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw schema_error("empty file: " + path);
  const auto header = split_csv_line(line);
  std::ptrdiff_t col_y = -1;
  std::vector<std::size_t> cov_cols;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == response_column) {
      col_y = static_cast<std::ptrdiff_t>(j);
    } else {
      cov_cols.push_back(j);
    }
  }
  if (col_y < 0) throw schema_error(path + ": missing response column " + response_column);
  XYData data;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw schema_error(path + ": row " + std::to_string(row) + " is ragged");
    }
    const std::string ctx = path + " row " + std::to_string(row);
    std::vector<double> x;
    for (std::size_t j : cov_cols) x.push_back(parse_double(cells[j], ctx));
    data.xs.push_back(std::move(x));
    data.ys.push_back(parse_double(cells[static_cast<std::size_t>(col_y)], ctx));
  }
  return data;
}

// Covariate rows from any CSV that carries the named columns; extra columns
// (responses, censoring fields) are ignored. Column order follows `names`.
inline std::vector<std::vector<double>> read_covariates(
    const std::string& path, const std::vector<std::string>& names) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw schema_error("empty file: " + path);
  const auto header = split_csv_line(line);
  std::vector<std::size_t> cols;
  for (const auto& name : names) {
    bool found = false;
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (header[j] == name) {
        cols.push_back(j);
        found = true;
        break;
      }
    }
    if (!found) throw schema_error(path + ": missing covariate column " + name);
  }
  std::vector<std::vector<double>> rows;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw schema_error(path + ": row " + std::to_string(row) + " is ragged");
    }
    std::vector<double> x;
    x.reserve(cols.size());
    for (std::size_t j : cols) {
      x.push_back(parse_double(cells[j], path + " row " + std::to_string(row)));
    }
    rows.push_back(std::move(x));
  }
  return rows;
}

// One row per test point, one column per reporting level.
inline void write_predictions(const std::string& path,
                              const ExpectilePredictionSet& preds) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open for writing: " + path);
  for (std::size_t ti = 0; ti < preds.target_levels.size(); ++ti) {
    if (ti) out << ',';
    out << "tau_" << format_double(preds.target_levels[ti]);
  }
  out << '\n';
  for (int i = 0; i < preds.average.rows; ++i) {
    for (std::size_t ti = 0; ti < preds.target_levels.size(); ++ti) {
      if (ti) out << ',';
      out << format_double(preds.average_at(i, ti));
    }
    out << '\n';
  }
  if (!out) throw io_error("write failed: " + path);
}

// Long-format per-iteration values at the reporting levels.
inline void write_prediction_detail(const std::string& path,
                                    const ExpectilePredictionSet& preds) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open for writing: " + path);
  out << "row,iteration,tau,value\n";
  for (std::size_t h = 0; h < preds.per_iteration.size(); ++h) {
    const Matrix& mat = preds.per_iteration[h];
    for (int i = 0; i < mat.rows; ++i) {
      for (std::size_t ti = 0; ti < preds.target_levels.size(); ++ti) {
        out << i << ',' << (h + 1) << ',' << format_double(preds.target_levels[ti])
            << ',' << format_double(mat(i, preds.target_columns[ti])) << '\n';
      }
    }
  }
  if (!out) throw io_error("write failed: " + path);
}

// Benchmark summary. The wall-clock column is populated only on request:
// timing varies run to run, and summaries are otherwise byte-reproducible.
inline void write_summary(const std::string& path, const ReplicationSummary& summary,
                          bool include_seconds = false) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open for writing: " + path);
  out << "scenario,method,tau,mean_el,el_ratio,seconds,failures\n";
  for (const auto& ms : summary.methods) {
    for (std::size_t ti = 0; ti < summary.taus.size(); ++ti) {
      out << summary.scenario_id << ',' << method_name(ms.method) << ','
          << format_double(summary.taus[ti]) << ','
          << (ms.completed > 0 ? format_double(ms.mean_el[ti]) : "") << ','
          << (ms.ratio_count > 0 ? format_double(ms.mean_ratio[ti]) : "") << ',';
      if (include_seconds && ms.completed > 0) out << format_double(ms.mean_seconds);
      out << ',' << ms.failures << '\n';
    }
  }
  if (!out) throw io_error("write failed: " + path);
}

// Per-replication expectile losses in plot-ready long format.
inline void write_replication_detail(const std::string& path,
                                     const ReplicationSummary& summary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open for writing: " + path);
  out << "scenario,method,replication,tau,el,status\n";
  for (const auto& rec : summary.records) {
    if (rec.ok) {
      for (std::size_t ti = 0; ti < summary.taus.size(); ++ti) {
        out << summary.scenario_id << ',' << method_name(rec.method) << ','
            << rec.replication << ',' << format_double(summary.taus[ti]) << ','
            << format_double(rec.el[ti]) << ",ok\n";
      }
    } else {
      out << summary.scenario_id << ',' << method_name(rec.method) << ','
          << rec.replication << ",,,failed\n";
    }
  }
  if (!out) throw io_error("write failed: " + path);
}

namespace detail {

inline void write_u32(std::ofstream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
inline void write_f64(std::ofstream& out, double v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
inline std::uint32_t read_u32(std::ifstream& in, const std::string& path) {
  std::uint32_t v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(v))) {
    throw schema_error("truncated binary file: " + path);
  }
  return v;
}
inline double read_f64(std::ifstream& in, const std::string& path) {
  double v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(v))) {
    throw schema_error("truncated binary file: " + path);
  }
  return v;
}

inline void write_params_blob(std::ofstream& out, const MlpParams& params) {
  write_u32(out, static_cast<std::uint32_t>(params.layer_count()));
  for (std::size_t l = 0; l < params.layer_count(); ++l) {
    const Matrix& w = params.weights[l];
    write_u32(out, static_cast<std::uint32_t>(w.rows));
    write_u32(out, static_cast<std::uint32_t>(w.cols));
    for (double v : w.data) write_f64(out, v);
    for (double v : params.biases[l]) write_f64(out, v);
  }
}

inline MlpParams read_params_blob(std::ifstream& in, const std::string& path) {
  MlpParams params;
  const std::uint32_t layers = read_u32(in, path);
  for (std::uint32_t l = 0; l < layers; ++l) {
    const int rows = static_cast<int>(read_u32(in, path));
    const int cols = static_cast<int>(read_u32(in, path));
    Matrix w(rows, cols);
    for (double& v : w.data) v = read_f64(in, path);
    std::vector<double> b(static_cast<std::size_t>(cols));
    for (double& v : b) v = read_f64(in, path);
    params.weights.push_back(std::move(w));
    params.biases.push_back(std::move(b));
  }
  return params;
}

}  // namespace detail

// Flat binary snapshot of one parameter set: layer count, then per layer
// rows, cols, row-major weights, biases. Native byte order.
inline void save_params(const std::string& path, const MlpParams& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open for writing: " + path);
  out.write("CXPARAM1", 8);
  detail::write_params_blob(out, params);
  if (!out) throw io_error("write failed: " + path);
}

inline MlpParams load_params(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open: " + path);
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, "CXPARAM1", 8) != 0) {
    throw schema_error("not a parameter snapshot: " + path);
  }
  return detail::read_params_blob(in, path);
}

// A fitted pipeline: every iteration's per-level models plus the metadata
// needed to reproduce averaged predictions on new covariates.
struct SavedModelBank {
  int method_tag = 0;  // 0 = network learner, 1 = linear learner
  int grid_size = 0;
  std::vector<int> grid_indices;
  std::vector<double> target_levels;
  MlpSpec spec;  // network banks only
  std::vector<std::vector<MlpParams>> mlp_banks;             // [iteration][level]
  std::vector<std::vector<LinearExpectileModel>> linear_banks;

  int iterations() const {
    return static_cast<int>(method_tag == 0 ? mlp_banks.size() : linear_banks.size());
  }
};

inline void save_model_bank(const std::string& path, const SavedModelBank& bank) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open for writing: " + path);
  out.write("CXBANK1\n", 8);
  detail::write_u32(out, static_cast<std::uint32_t>(bank.method_tag));
  detail::write_u32(out, static_cast<std::uint32_t>(bank.grid_size));
  detail::write_u32(out, static_cast<std::uint32_t>(bank.iterations()));
  detail::write_u32(out, static_cast<std::uint32_t>(bank.grid_indices.size()));
  for (int k : bank.grid_indices) detail::write_u32(out, static_cast<std::uint32_t>(k));
  detail::write_u32(out, static_cast<std::uint32_t>(bank.target_levels.size()));
  for (double t : bank.target_levels) detail::write_f64(out, t);
  if (bank.method_tag == 0) {
    detail::write_u32(out, static_cast<std::uint32_t>(bank.spec.input_dim));
    detail::write_u32(out, static_cast<std::uint32_t>(bank.spec.hidden_widths.size()));
    for (int w : bank.spec.hidden_widths) detail::write_u32(out, static_cast<std::uint32_t>(w));
    detail::write_u32(out, bank.spec.activation == Activation::ReLU ? 0u : 1u);
    detail::write_f64(out, bank.spec.dropout_rate);
    for (const auto& models : bank.mlp_banks) {
      for (const auto& params : models) detail::write_params_blob(out, params);
    }
  } else {
    const std::uint32_t p1 = bank.linear_banks.empty() || bank.linear_banks[0].empty()
                                 ? 0u
                                 : static_cast<std::uint32_t>(bank.linear_banks[0][0].beta.size());
    detail::write_u32(out, p1);
    for (const auto& models : bank.linear_banks) {
      for (const auto& model : models) {
        detail::write_f64(out, model.tau);
        for (double b : model.beta) detail::write_f64(out, b);
      }
    }
  }
  if (!out) throw io_error("write failed: " + path);
}

inline SavedModelBank load_model_bank(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open: " + path);
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, "CXBANK1\n", 8) != 0) {
    throw schema_error("not a model bank: " + path);
  }
  SavedModelBank bank;
  bank.method_tag = static_cast<int>(detail::read_u32(in, path));
  bank.grid_size = static_cast<int>(detail::read_u32(in, path));
  const std::uint32_t iterations = detail::read_u32(in, path);
  const std::uint32_t n_levels = detail::read_u32(in, path);
  bank.grid_indices.resize(n_levels);
  for (auto& k : bank.grid_indices) k = static_cast<int>(detail::read_u32(in, path));
  const std::uint32_t n_targets = detail::read_u32(in, path);
  bank.target_levels.resize(n_targets);
  for (auto& t : bank.target_levels) t = detail::read_f64(in, path);
  if (bank.method_tag == 0) {
    bank.spec.input_dim = static_cast<int>(detail::read_u32(in, path));
    const std::uint32_t n_hidden = detail::read_u32(in, path);
    bank.spec.hidden_widths.resize(n_hidden);
    for (auto& w : bank.spec.hidden_widths) w = static_cast<int>(detail::read_u32(in, path));
    bank.spec.activation = detail::read_u32(in, path) == 0 ? Activation::ReLU : Activation::Sigmoid;
    bank.spec.dropout_rate = detail::read_f64(in, path);
    bank.mlp_banks.resize(iterations);
    for (auto& models : bank.mlp_banks) {
      models.reserve(n_levels);
      for (std::uint32_t i = 0; i < n_levels; ++i) {
        models.push_back(detail::read_params_blob(in, path));
      }
    }
  } else {
    const std::uint32_t p1 = detail::read_u32(in, path);
    bank.linear_banks.resize(iterations);
    for (auto& models : bank.linear_banks) {
      for (std::uint32_t i = 0; i < n_levels; ++i) {
        LinearExpectileModel model;
        model.tau = detail::read_f64(in, path);
        model.beta.resize(p1);
        for (auto& b : model.beta) b = detail::read_f64(in, path);
        models.push_back(std::move(model));
      }
    }
  }
  return bank;
}

// Recomputes averaged predictions from a saved bank; matches the fit-time
// averaging arithmetic exactly.
inline ExpectilePredictionSet predict_from_bank(const SavedModelBank& bank,
                                                const std::vector<std::vector<double>>& test_xs) {
  ExpectilePredictionSet result;
  result.grid_size = bank.grid_size;
  result.grid_indices = bank.grid_indices;
  result.target_levels = bank.target_levels;
  const LevelGrid grid = expectile_grid(bank.grid_size);
  for (int k : bank.grid_indices) result.stored_levels.push_back(grid.tau(k));
  for (double t : bank.target_levels) {
    const int k = nearest_grid_index(bank.grid_size, t);
    const auto it = std::lower_bound(bank.grid_indices.begin(), bank.grid_indices.end(), k);
    if (it == bank.grid_indices.end() || *it != k) {
      throw schema_error("model bank does not store the grid level for tau=" + format_double(t));
    }
    result.target_columns.push_back(static_cast<int>(it - bank.grid_indices.begin()));
  }
  const int n_test = static_cast<int>(test_xs.size());
  const int n_stored = static_cast<int>(bank.grid_indices.size());
  const int H = bank.iterations();
  result.average.resize(n_test, n_stored);
  for (int h = 0; h < H; ++h) {
    Matrix preds(n_test, n_stored);
    for (int i = 0; i < n_test; ++i) {
      for (int c = 0; c < n_stored; ++c) {
        if (bank.method_tag == 0) {
          preds(i, c) = forward(bank.spec, bank.mlp_banks[static_cast<std::size_t>(h)][static_cast<std::size_t>(c)],
                                test_xs[static_cast<std::size_t>(i)], PassMode::Eval);
        } else {
          preds(i, c) = linear_predict(bank.linear_banks[static_cast<std::size_t>(h)][static_cast<std::size_t>(c)],
                                       test_xs[static_cast<std::size_t>(i)]);
        }
      }
    }
    for (std::size_t idx = 0; idx < result.average.data.size(); ++idx) {
      result.average.data[idx] += preds.data[idx];
    }
    result.per_iteration.push_back(std::move(preds));
  }
  const double inv_h = 1.0 / static_cast<double>(H);
  for (double& v : result.average.data) v *= inv_h;
  return result;
}

}  // namespace cerx
