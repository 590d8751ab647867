// Evaluation metrics and hyperparameter selection: expectile loss on a test
// set, loss ratios between methods, k-fold splitting, and grid-search
// cross-validation over the network training knobs.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "cerx/errors.hpp"
#include "cerx/expectile.hpp"
#include "cerx/mlp.hpp"
#include "cerx/parallel.hpp"
#include "cerx/rng.hpp"

namespace cerx {

// Mean check loss of predictions against true responses.
inline double expectile_loss_metric(std::span<const double> y,
                                    std::span<const double> yhat,
                                    ExpectileLevel tau) {
  if (y.size() != yhat.size()) {
    throw std::domain_error("expectile_loss_metric: length mismatch");
  }
  if (y.empty()) throw std::domain_error("expectile_loss_metric: empty input");
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    s += check_loss(y[i] - yhat[i], tau);
  }
  return s / static_cast<double>(y.size());
}

inline double el_ratio(double el_daernn, double el_compete) {
  if (!(el_compete > 0.0)) {
    throw std::domain_error("el_ratio: competitor loss must be positive");
  }
  return el_daernn / el_compete;
}

// Seeded shuffle into k disjoint, exhaustive folds with sizes differing by
// at most one.
inline std::vector<std::vector<std::size_t>> kfold_split(std::size_t n, int k,
                                                         std::uint64_t seed) {
  if (k < 2) throw std::domain_error("kfold_split: need at least 2 folds");
  if (static_cast<std::size_t>(k) > n) {
    throw std::domain_error("kfold_split: more folds than observations");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);
  std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
  const std::size_t base = n / static_cast<std::size_t>(k);
  const std::size_t extra = n % static_cast<std::size_t>(k);
  std::size_t pos = 0;
  for (std::size_t f = 0; f < static_cast<std::size_t>(k); ++f) {
    const std::size_t size = base + (f < extra ? 1 : 0);
    folds[f].assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                    order.begin() + static_cast<std::ptrdiff_t>(pos + size));
    pos += size;
  }
  return folds;
}

// Candidate training configurations. Lists are kept sorted ascending so the
// first strict minimum in iteration order realizes the tie-break: fewer
// layers, then fewer nodes, lower learning rate, lower dropout, fewer
// epochs, smaller batch.
struct HyperGrid {
  std::vector<int> layers{2, 3, 4};
  std::vector<int> nodes{16, 32, 64};
  std::vector<double> learning_rates{0.01, 0.1};
  std::vector<double> dropouts{0.1, 0.2, 0.3};
  std::vector<int> epochs{50, 100};
  std::vector<int> batch_sizes{64, 128, 256};

  void canonicalize() {
    auto fix = [](auto& v) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    fix(layers);
    fix(nodes);
    fix(learning_rates);
    fix(dropouts);
    fix(epochs);
    fix(batch_sizes);
    if (layers.empty() || nodes.empty() || learning_rates.empty() ||
        dropouts.empty() || epochs.empty() || batch_sizes.empty()) {
      throw std::domain_error("HyperGrid: every dimension needs at least one value");
    }
  }
};

struct HyperPoint {
  int layers = 3;
  int nodes = 32;
  double learning_rate = 0.1;
  double dropout = 0.2;
  int epochs = 100;
  int batch = 128;

  MlpSpec to_spec(int input_dim) const {
    MlpSpec spec;
    spec.input_dim = input_dim;
    spec.hidden_widths.assign(static_cast<std::size_t>(layers), nodes);
    spec.activation = Activation::ReLU;
    spec.dropout_rate = dropout;
    return spec;
  }

  TrainConfig to_train(std::uint64_t seed) const {
    TrainConfig cfg;
    cfg.learning_rate = learning_rate;
    cfg.epochs = epochs;
    cfg.batch_size = batch;
    cfg.seed = seed;
    return cfg;
  }
};

struct CvEntry {
  HyperPoint point;
  double cv_loss = 0.0;  // +inf marks a diverged configuration
};

struct CvResult {
  HyperPoint best;
  double best_loss = 0.0;
  std::vector<CvEntry> table;
};

// 5-fold (by default) cross-validated grid search on uncensored rows only.
// A configuration whose training diverges on any fold scores +inf and stays
// in the table rather than aborting the search.
inline CvResult grid_search_cv(const std::vector<std::vector<double>>& xs,
                               const std::vector<double>& ys,
                               HyperGrid grid, int k, ExpectileLevel tau,
                               std::uint64_t seed, int jobs = 1) {
  if (xs.empty() || xs.size() != ys.size()) {
    throw std::domain_error("grid_search_cv: empty or mismatched data");
  }
  if (xs.size() < static_cast<std::size_t>(k)) {
    throw std::domain_error("grid_search_cv: fewer observations than folds");
  }
  grid.canonicalize();
  const int input_dim = static_cast<int>(xs[0].size());
  const auto folds = kfold_split(xs.size(), k, seed);

  std::vector<HyperPoint> points;
  for (int l : grid.layers)
    for (int nd : grid.nodes)
      for (double lr : grid.learning_rates)
        for (double dr : grid.dropouts)
          for (int ep : grid.epochs)
            for (int bs : grid.batch_sizes) {
              points.push_back(HyperPoint{l, nd, lr, dr, ep, bs});
            }

  std::vector<double> scores(points.size(), 0.0);
  parallel_for(points.size(), jobs, [&](std::size_t pi) {
    const HyperPoint& pt = points[pi];
    const MlpSpec spec = pt.to_spec(input_dim);
    double total = 0.0;
    std::size_t scored = 0;
    for (std::size_t f = 0; f < folds.size(); ++f) {
      std::vector<std::vector<double>> train_x, test_x;
      std::vector<double> train_y, test_y;
      std::vector<char> held(xs.size(), 0);
      for (std::size_t idx : folds[f]) held[idx] = 1;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (held[i]) {
          test_x.push_back(xs[i]);
          test_y.push_back(ys[i]);
        } else {
          train_x.push_back(xs[i]);
          train_y.push_back(ys[i]);
        }
      }
      try {
        // Common random numbers across grid points: the fit seed depends on
        // the fold alone, so configurations that train identically score
        // identically and the tie-break stays meaningful.
        const TrainConfig cfg = pt.to_train(derive_seed(seed, stream::kCv, f));
        const MlpParams params = train_mbgd(train_x, train_y, spec, cfg, tau.value());
        const std::vector<double> preds = predict(spec, params, test_x);
        total += expectile_loss_metric(test_y, preds, tau);
        ++scored;
      } catch (const train_error&) {
        total = std::numeric_limits<double>::infinity();
        break;
      }
    }
    scores[pi] = std::isinf(total) ? total : total / static_cast<double>(scored);
  });

  CvResult result;
  result.table.reserve(points.size());
  std::size_t best_idx = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    result.table.push_back({points[i], scores[i]});
    if (scores[i] < scores[best_idx]) best_idx = i;
  }
  result.best = points[best_idx];
  result.best_loss = scores[best_idx];
  return result;
}

}  // namespace cerx
