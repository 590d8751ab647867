// Multilayer perceptron trained under the expectile check loss with plain
// mini-batch gradient descent. Deterministic given a seed: parameter
// initialization, epoch shuffles, and dropout masks all come from streams
// derived from the configured seed.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cerx/errors.hpp"
#include "cerx/expectile.hpp"
#include "cerx/matrix.hpp"
#include "cerx/rng.hpp"

namespace cerx {

enum class Activation { ReLU, Sigmoid };
enum class PassMode { Train, Eval };

struct MlpSpec {
  int input_dim = 0;
  std::vector<int> hidden_widths;
  Activation activation = Activation::ReLU;
  double dropout_rate = 0.0;

  void validate() const {
    if (input_dim < 1) throw std::domain_error("MlpSpec: input_dim must be positive");
    if (hidden_widths.empty()) throw std::domain_error("MlpSpec: at least one hidden layer required");
    for (int w : hidden_widths) {
      if (w < 1) throw std::domain_error("MlpSpec: hidden widths must be positive");
    }
    if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
      throw std::domain_error("MlpSpec: dropout rate must lie in [0, 1)");
    }
  }

  // Layer fan-in/fan-out pairs, hidden layers first, output layer last.
  std::vector<std::pair<int, int>> layer_dims() const {
    std::vector<std::pair<int, int>> dims;
    int in = input_dim;
    for (int w : hidden_widths) {
      dims.emplace_back(in, w);
      in = w;
    }
    dims.emplace_back(in, 1);
    return dims;
  }
};

// Weight matrices are (fan_in x fan_out) row-major; the last entry is the
// single-unit linear output layer.
struct MlpParams {
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;

  std::size_t layer_count() const { return weights.size(); }

  void scale_add(const MlpParams& other, double factor) {
    for (std::size_t l = 0; l < weights.size(); ++l) {
      double* w = weights[l].data.data();
      const double* g = other.weights[l].data.data();
      const std::size_t nw = weights[l].data.size();
      for (std::size_t i = 0; i < nw; ++i) w[i] += factor * g[i];
      double* b = biases[l].data();
      const double* gb = other.biases[l].data();
      for (std::size_t i = 0; i < biases[l].size(); ++i) b[i] += factor * gb[i];
    }
  }
};

struct TrainConfig {
  double learning_rate = 0.1;
  int epochs = 100;
  int batch_size = 128;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(learning_rate > 0.0)) throw std::domain_error("TrainConfig: learning rate must be positive");
    if (epochs < 1) throw std::domain_error("TrainConfig: epochs must be positive");
    if (batch_size < 1) throw std::domain_error("TrainConfig: batch size must be positive");
  }
};

// He-style initialization: zero-mean normal weights with variance 2/fan_in
// for ReLU and 1/fan_in for Sigmoid; biases zero.
inline MlpParams init_params(const MlpSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  const double numer = spec.activation == Activation::ReLU ? 2.0 : 1.0;
  MlpParams params;
  for (auto [fan_in, fan_out] : spec.layer_dims()) {
    Matrix w(fan_in, fan_out);
    const double sd = std::sqrt(numer / static_cast<double>(fan_in));
    for (double& v : w.data) v = sd * rng.normal();
    params.weights.push_back(std::move(w));
    params.biases.emplace_back(static_cast<std::size_t>(fan_out), 0.0);
  }
  return params;
}

inline MlpParams zero_like(const MlpParams& params) {
  MlpParams z;
  z.weights.reserve(params.weights.size());
  z.biases.reserve(params.biases.size());
  for (const auto& w : params.weights) z.weights.emplace_back(w.rows, w.cols);
  for (const auto& b : params.biases) z.biases.emplace_back(b.size(), 0.0);
  return z;
}

namespace detail {

inline double activate(double z, Activation act) {
  if (act == Activation::ReLU) return z > 0.0 ? z : 0.0;
  return 1.0 / (1.0 + std::exp(-z));
}

// Derivative expressed through the pre-dropout activation value.
inline double activate_grad(double a, Activation act) {
  if (act == Activation::ReLU) return a > 0.0 ? 1.0 : 0.0;
  return a * (1.0 - a);
}

}  // namespace detail

// Per-sample layer activations (post-dropout) kept from a forward pass.
struct ForwardCache {
  std::vector<std::vector<double>> activations;
};

// Single-sample forward pass. Train mode applies inverted dropout to hidden
// activations (mask drawn from rng, scaled by 1/keep); Eval mode is
// dropout-free by construction.
inline double forward(const MlpSpec& spec, const MlpParams& params,
                      std::span<const double> x, PassMode mode,
                      Rng* rng = nullptr, ForwardCache* cache = nullptr) {
  if (static_cast<int>(x.size()) != spec.input_dim) {
    throw std::domain_error("forward: covariate dimension mismatch");
  }
  const bool drop = mode == PassMode::Train && spec.dropout_rate > 0.0;
  if (drop && rng == nullptr) {
    throw std::domain_error("forward: train-mode dropout needs a random stream");
  }
  const double keep = 1.0 - spec.dropout_rate;
  std::vector<double> cur(x.begin(), x.end());
  if (cache) cache->activations.clear();
  const std::size_t n_layers = params.layer_count();
  for (std::size_t l = 0; l < n_layers; ++l) {
    const Matrix& w = params.weights[l];
    const auto& b = params.biases[l];
    std::vector<double> next(static_cast<std::size_t>(w.cols));
    for (int j = 0; j < w.cols; ++j) next[static_cast<std::size_t>(j)] = b[static_cast<std::size_t>(j)];
    for (int i = 0; i < w.rows; ++i) {
      const double a = cur[static_cast<std::size_t>(i)];
      const double* wrow = w.row(i);
      for (int j = 0; j < w.cols; ++j) next[static_cast<std::size_t>(j)] += a * wrow[j];
    }
    if (l + 1 < n_layers) {
      for (double& v : next) v = detail::activate(v, spec.activation);
      if (drop) {
        for (double& v : next) {
          v = rng->uniform() < keep ? v / keep : 0.0;
        }
      }
    }
    if (cache) cache->activations.push_back(next);
    cur = std::move(next);
  }
  return cur[0];
}

// Eval-mode predictions, order preserving.
inline std::vector<double> predict(const MlpSpec& spec, const MlpParams& params,
                                   const std::vector<std::vector<double>>& xs) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(forward(spec, params, x, PassMode::Eval));
  return out;
}

namespace detail {

// Reusable buffers for batched forward/backward passes.
struct BatchWorkspace {
  Matrix input;                 // B x p
  std::vector<Matrix> act;      // pre-dropout activations per hidden layer
  std::vector<Matrix> dropped;  // post-dropout activations (train w/ dropout)
  std::vector<Matrix> mask;     // dropout masks (0 or 1/keep)
  std::vector<Matrix> delta;    // gradient wrt each layer's output
  std::vector<Matrix> wt;       // transposed weights, rebuilt each backward pass
  std::vector<double> zero_bias;
  std::vector<double> preds;
  std::vector<double> dpred;

  void configure(const MlpSpec& spec, int max_batch) {
    const auto dims = spec.layer_dims();
    const std::size_t n_layers = dims.size();
    input.resize(max_batch, spec.input_dim);
    act.assign(n_layers, Matrix());
    dropped.assign(n_layers, Matrix());
    mask.assign(n_layers, Matrix());
    delta.assign(n_layers, Matrix());
    wt.assign(n_layers, Matrix());
    int max_width = spec.input_dim;
    for (std::size_t l = 0; l < n_layers; ++l) {
      act[l].resize(max_batch, dims[l].second);
      dropped[l].resize(max_batch, dims[l].second);
      mask[l].resize(max_batch, dims[l].second);
      delta[l].resize(max_batch, dims[l].second);
      wt[l].resize(dims[l].second, dims[l].first);
      max_width = std::max(max_width, dims[l].second);
    }
    zero_bias.assign(static_cast<std::size_t>(max_width), 0.0);
    preds.assign(static_cast<std::size_t>(max_batch), 0.0);
    dpred.assign(static_cast<std::size_t>(max_batch), 0.0);
  }
};

// Z = X . W + bias, with X restricted to the first B rows.
inline void affine_forward(const Matrix& x, int batch, const Matrix& w,
                           const std::vector<double>& bias, Matrix& out) {
  for (int i = 0; i < batch; ++i) {
    double* o = out.row(i);
    for (int j = 0; j < w.cols; ++j) o[j] = bias[static_cast<std::size_t>(j)];
    const double* xi = x.row(i);
    for (int k = 0; k < w.rows; ++k) {
      const double a = xi[k];
      if (a == 0.0) continue;
      const double* wk = w.row(k);
      for (int j = 0; j < w.cols; ++j) o[j] += a * wk[j];
    }
  }
}

// grad_w += A^T . delta ; grad_b += column sums of delta.
inline void accumulate_grads(const Matrix& a, int batch, const Matrix& delta,
                             Matrix& grad_w, std::vector<double>& grad_b) {
  for (int i = 0; i < batch; ++i) {
    const double* ai = a.row(i);
    const double* di = delta.row(i);
    for (int k = 0; k < grad_w.rows; ++k) {
      const double v = ai[k];
      if (v == 0.0) continue;
      double* gw = grad_w.row(k);
      for (int j = 0; j < grad_w.cols; ++j) gw[j] += v * di[j];
    }
    for (int j = 0; j < grad_w.cols; ++j) grad_b[static_cast<std::size_t>(j)] += di[j];
  }
}

inline void transpose_into(const Matrix& w, Matrix& wt) {
  for (int r = 0; r < w.rows; ++r) {
    const double* src = w.row(r);
    for (int c = 0; c < w.cols; ++c) wt(c, r) = src[c];
  }
}

// Batched loss + gradient; the workspace's input matrix must already hold
// the batch covariates in its first `batch` rows. Gradients are written
// (not accumulated) into `grad`, which must be shaped like `params`.
inline double loss_and_gradient_ws(const MlpSpec& spec, const MlpParams& params,
                                   int batch, std::span<const double> targets,
                                   double tau, PassMode mode, Rng& rng,
                                   BatchWorkspace& ws, MlpParams& grad) {
  const std::size_t n_layers = params.layer_count();
  const bool drop = mode == PassMode::Train && spec.dropout_rate > 0.0;
  const double keep = 1.0 - spec.dropout_rate;

  // Forward.
  const Matrix* below = &ws.input;
  for (std::size_t l = 0; l < n_layers; ++l) {
    affine_forward(*below, batch, params.weights[l], params.biases[l], ws.act[l]);
    if (l + 1 < n_layers) {
      Matrix& a = ws.act[l];
      for (int i = 0; i < batch; ++i) {
        double* row = a.row(i);
        for (int j = 0; j < a.cols; ++j) row[j] = activate(row[j], spec.activation);
      }
      if (drop) {
        Matrix& m = ws.mask[l];
        Matrix& d = ws.dropped[l];
        for (int i = 0; i < batch; ++i) {
          const double* arow = a.row(i);
          double* mrow = m.row(i);
          double* drow = d.row(i);
          for (int j = 0; j < a.cols; ++j) {
            mrow[j] = rng.uniform() < keep ? 1.0 / keep : 0.0;
            drow[j] = arow[j] * mrow[j];
          }
        }
        below = &d;
      } else {
        below = &a;
      }
    }
  }

  // Loss and output gradient.
  double loss = 0.0;
  const double inv_b = 1.0 / static_cast<double>(batch);
  for (int i = 0; i < batch; ++i) {
    const double pred = ws.act[n_layers - 1](i, 0);
    const double u = targets[static_cast<std::size_t>(i)] - pred;
    const double w = check_weight(u, tau);
    loss += 0.5 * w * u * u;
    ws.delta[n_layers - 1](i, 0) = -inv_b * w * u;  // d(loss)/d(pred)
  }
  loss *= inv_b;

  // Backward.
  for (auto& gw : grad.weights) gw.fill(0.0);
  for (auto& gb : grad.biases) std::fill(gb.begin(), gb.end(), 0.0);
  for (std::size_t l = n_layers; l-- > 0;) {
    const Matrix* a_in =
        l == 0 ? &ws.input : (drop ? &ws.dropped[l - 1] : &ws.act[l - 1]);
    accumulate_grads(*a_in, batch, ws.delta[l], grad.weights[l], grad.biases[l]);
    if (l == 0) break;
    // delta_{l-1} = delta_l . W_l^T, via the forward kernel on the transpose.
    transpose_into(params.weights[l], ws.wt[l]);
    affine_forward(ws.delta[l], batch, ws.wt[l], ws.zero_bias, ws.delta[l - 1]);
    // Through dropout mask and the activation derivative.
    Matrix& dprev = ws.delta[l - 1];
    const Matrix& aprev = ws.act[l - 1];
    for (int i = 0; i < batch; ++i) {
      double* drow = dprev.row(i);
      const double* arow = aprev.row(i);
      if (drop) {
        const double* mrow = ws.mask[l - 1].row(i);
        for (int j = 0; j < dprev.cols; ++j) {
          drow[j] *= mrow[j] * activate_grad(arow[j], spec.activation);
        }
      } else {
        for (int j = 0; j < dprev.cols; ++j) {
          drow[j] *= activate_grad(arow[j], spec.activation);
        }
      }
    }
  }
  return loss;
}

}  // namespace detail

struct LossGrad {
  double loss = 0.0;
  MlpParams grad;
};

// Mean check loss over a batch and its gradient with respect to every
// parameter, by reverse-mode accumulation.
inline LossGrad loss_and_gradient(const MlpSpec& spec, const MlpParams& params,
                                  const std::vector<std::vector<double>>& xs,
                                  std::span<const double> targets, double tau,
                                  PassMode mode, Rng& rng) {
  if (xs.empty()) throw std::domain_error("loss_and_gradient: empty batch");
  if (xs.size() != targets.size()) {
    throw std::domain_error("loss_and_gradient: batch size mismatch");
  }
  for (double t : targets) {
    if (!std::isfinite(t)) throw std::domain_error("loss_and_gradient: non-finite target");
  }
  const int batch = static_cast<int>(xs.size());
  detail::BatchWorkspace ws;
  ws.configure(spec, batch);
  for (int i = 0; i < batch; ++i) {
    if (static_cast<int>(xs[static_cast<std::size_t>(i)].size()) != spec.input_dim) {
      throw std::domain_error("loss_and_gradient: covariate dimension mismatch");
    }
    std::copy(xs[static_cast<std::size_t>(i)].begin(), xs[static_cast<std::size_t>(i)].end(), ws.input.row(i));
  }
  LossGrad out;
  out.grad = zero_like(params);
  out.loss = detail::loss_and_gradient_ws(spec, params, batch, targets, tau, mode, rng, ws, out.grad);
  return out;
}

// Mini-batch gradient descent under the check loss. Each epoch reshuffles
// with the seeded stream and visits every batch, including a smaller final
// one. Optionally starts from given parameters (used for warm starts) and
// records the mean per-epoch training loss.
inline MlpParams train_mbgd(const std::vector<std::vector<double>>& xs,
                            std::span<const double> ys, const MlpSpec& spec,
                            const TrainConfig& config, double tau,
                            const MlpParams* start = nullptr,
                            std::vector<double>* epoch_losses = nullptr) {
  spec.validate();
  config.validate();
  if (xs.empty()) throw std::domain_error("train_mbgd: empty training set");
  if (xs.size() != ys.size()) throw std::domain_error("train_mbgd: xs/ys size mismatch");
  for (double y : ys) {
    if (!std::isfinite(y)) throw std::domain_error("train_mbgd: non-finite target");
  }

  const int n = static_cast<int>(xs.size());
  const int batch_size = std::min(config.batch_size, n);
  MlpParams params = start != nullptr ? *start : init_params(spec, derive_seed(config.seed, stream::kInit));
  MlpParams grad = zero_like(params);
  Rng rng(derive_seed(config.seed, stream::kTrain));

  detail::BatchWorkspace ws;
  ws.configure(spec, batch_size);
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> targets(static_cast<std::size_t>(batch_size));
  if (epoch_losses) epoch_losses->clear();

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    int batches = 0;
    for (int offset = 0; offset < n; offset += batch_size) {
      const int b = std::min(batch_size, n - offset);
      for (int i = 0; i < b; ++i) {
        const int src = order[static_cast<std::size_t>(offset + i)];
        std::copy(xs[static_cast<std::size_t>(src)].begin(), xs[static_cast<std::size_t>(src)].end(), ws.input.row(i));
        targets[static_cast<std::size_t>(i)] = ys[static_cast<std::size_t>(src)];
      }
      const double loss = detail::loss_and_gradient_ws(
          spec, params, b, std::span<const double>(targets.data(), static_cast<std::size_t>(b)),
          tau, PassMode::Train, rng, ws, grad);
      if (!std::isfinite(loss)) {
        throw train_error("training diverged at epoch " + std::to_string(epoch + 1) +
                          ": loss is not finite");
      }
      params.scale_add(grad, -config.learning_rate);
      epoch_loss += loss;
      ++batches;
    }
    if (epoch_losses) epoch_losses->push_back(epoch_loss / batches);
  }
  return params;
}

inline MlpParams train_mbgd(const std::vector<std::vector<double>>& xs,
                            const std::vector<double>& ys, const MlpSpec& spec,
                            const TrainConfig& config, double tau,
                            const MlpParams* start = nullptr,
                            std::vector<double>* epoch_losses = nullptr) {
  return train_mbgd(xs, std::span<const double>(ys), spec, config, tau, start, epoch_losses);
}

}  // namespace cerx
