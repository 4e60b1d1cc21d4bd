#include "dimcut/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "dimcut/parallel.hpp"

namespace dimcut {

namespace {

constexpr std::uint64_t kFoldStream = 0x666f6c64ULL;
constexpr std::uint64_t kSplitStream = 0x73706c6974ULL;

double activate(Activation a, double z) {
  return a == Activation::ReLU ? (z > 0.0 ? z : 0.0) : std::tanh(z);
}

// Derivative expressed through the pre-activation and the activation value.
double activate_grad(Activation a, double z, double h) {
  return a == Activation::ReLU ? (z > 0.0 ? 1.0 : 0.0) : 1.0 - h * h;
}

}  // namespace

std::string_view to_string(Activation activation) noexcept {
  return activation == Activation::ReLU ? "relu" : "tanh";
}

void MlpConfig::validate() const {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (max_epochs < 1) throw std::invalid_argument("max_epochs must be positive");
  if (patience < 1) throw std::invalid_argument("patience must be positive");
  if (k_folds < 2) throw std::invalid_argument("k_folds must be at least 2");
  if (!(hidden_multiplier > 0.0)) throw std::invalid_argument("hidden_multiplier must be positive");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be positive");
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    throw std::invalid_argument("validation_fraction must lie in (0, 1)");
  }
}

std::size_t hidden_units(std::size_t n_inputs, double multiplier) {
  // nearbyint honours the default round-to-nearest-even mode.
  const double units = std::nearbyint(multiplier * static_cast<double>(n_inputs));
  return std::max<std::size_t>(2, static_cast<std::size_t>(units));
}

DivergenceError::DivergenceError(std::size_t fold, std::size_t epoch)
    : std::runtime_error("MLP training diverged (non-finite loss) in fold " +
                         std::to_string(fold) + " at epoch " + std::to_string(epoch)),
      epoch_(epoch) {}

Standardizer Standardizer::fit(const Matrix& x, std::span<const std::size_t> rows) {
  Standardizer s;
  const std::size_t f = x.cols();
  s.mean.assign(f, 0.0);
  s.scale.assign(f, 1.0);
  if (rows.empty()) return s;
  for (std::size_t r : rows) {
    const auto row = x.row(r);
    for (std::size_t j = 0; j < f; ++j) s.mean[j] += row[j];
  }
  const double n = static_cast<double>(rows.size());
  for (double& m : s.mean) m /= n;
  std::vector<double> var(f, 0.0);
  for (std::size_t r : rows) {
    const auto row = x.row(r);
    for (std::size_t j = 0; j < f; ++j) {
      const double d = row[j] - s.mean[j];
      var[j] += d * d;
    }
  }
  for (std::size_t j = 0; j < f; ++j) {
    const double sd = std::sqrt(var[j] / n);
    s.scale[j] = sd > 0.0 ? sd : 1.0;
  }
  return s;
}

Matrix Standardizer::apply(const Matrix& x, std::span<const std::size_t> rows) const {
  Matrix out(rows.size(), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto src = x.row(rows[i]);
    auto dst = out.row(i);
    for (std::size_t j = 0; j < x.cols(); ++j) dst[j] = (src[j] - mean[j]) / scale[j];
  }
  return out;
}

Network::Network(std::size_t inputs, std::size_t hidden, std::size_t outputs,
                 Activation activation, bool softmax_output)
    : inputs_(inputs),
      hidden_(hidden),
      outputs_(outputs),
      activation_(activation),
      softmax_(softmax_output),
      params_(hidden * inputs + hidden + outputs * hidden + outputs, 0.0) {
  if (inputs == 0 || hidden == 0 || outputs == 0) {
    throw std::invalid_argument("network layers must be non-empty");
  }
}

void Network::init_random(Rng& rng, bool zero_output) {
  std::fill(params_.begin(), params_.end(), 0.0);
  const double limit1 = std::sqrt(6.0 / static_cast<double>(inputs_));
  const double limit2 = std::sqrt(6.0 / static_cast<double>(hidden_));
  double* p = params_.data();
  for (std::size_t i = 0; i < hidden_ * inputs_; ++i) p[i] = rng.uniform(-limit1, limit1);
  if (zero_output) return;
  p += hidden_ * inputs_ + hidden_;
  for (std::size_t i = 0; i < outputs_ * hidden_; ++i) p[i] = rng.uniform(-limit2, limit2);
}

void Network::init_zero() { std::fill(params_.begin(), params_.end(), 0.0); }

double Network::forward(std::span<const double> row, std::span<double> pre, std::span<double> act,
                        std::span<double> out) const {
  const double* w1 = params_.data();
  const double* b1 = w1 + hidden_ * inputs_;
  const double* w2 = b1 + hidden_;
  const double* b2 = w2 + outputs_ * hidden_;
  for (std::size_t h = 0; h < hidden_; ++h) {
    const double* w = w1 + h * inputs_;
    double z = b1[h];
    for (std::size_t i = 0; i < inputs_; ++i) z += w[i] * row[i];
    pre[h] = z;
    act[h] = activate(activation_, z);
  }
  for (std::size_t o = 0; o < outputs_; ++o) {
    const double* w = w2 + o * hidden_;
    double z = b2[o];
    for (std::size_t h = 0; h < hidden_; ++h) z += w[h] * act[h];
    out[o] = z;
  }
  if (!softmax_) return out[0];
  const double peak = *std::max_element(out.begin(), out.end());
  double total = 0.0;
  for (double& v : out) {
    v = std::exp(v - peak);
    total += v;
  }
  for (double& v : out) v /= total;
  return 0.0;
}

double Network::loss(const Matrix& x, std::span<const double> targets,
                     std::span<const std::size_t> rows, std::span<double> gradient) const {
  std::vector<double> pre(hidden_), act(hidden_), out(outputs_), delta_out(outputs_),
      delta_hidden(hidden_);
  const bool want_grad = !gradient.empty();
  if (want_grad) std::fill(gradient.begin(), gradient.end(), 0.0);

  const double* w2 = params_.data() + hidden_ * inputs_ + hidden_;
  double* g_w1 = want_grad ? gradient.data() : nullptr;
  double* g_b1 = want_grad ? g_w1 + hidden_ * inputs_ : nullptr;
  double* g_w2 = want_grad ? g_b1 + hidden_ : nullptr;
  double* g_b2 = want_grad ? g_w2 + outputs_ * hidden_ : nullptr;

  double total = 0.0;
  for (std::size_t r : rows) {
    const auto row = x.row(r);
    const double y = targets[r];
    const double value = forward(row, pre, act, out);
    if (softmax_) {
      const auto label = static_cast<std::size_t>(y);
      total -= std::log(std::max(out[label], std::numeric_limits<double>::min()));
      if (!want_grad) continue;
      for (std::size_t o = 0; o < outputs_; ++o) delta_out[o] = out[o] - (o == label ? 1.0 : 0.0);
    } else {
      const double err = value - y;
      total += err * err;
      if (!want_grad) continue;
      delta_out[0] = 2.0 * err;
    }
    for (std::size_t h = 0; h < hidden_; ++h) delta_hidden[h] = 0.0;
    for (std::size_t o = 0; o < outputs_; ++o) {
      const double d = delta_out[o];
      const double* w = w2 + o * hidden_;
      double* gw = g_w2 + o * hidden_;
      for (std::size_t h = 0; h < hidden_; ++h) {
        gw[h] += d * act[h];
        delta_hidden[h] += d * w[h];
      }
      g_b2[o] += d;
    }
    for (std::size_t h = 0; h < hidden_; ++h) {
      const double d = delta_hidden[h] * activate_grad(activation_, pre[h], act[h]);
      if (d == 0.0) continue;
      double* gw = g_w1 + h * inputs_;
      for (std::size_t i = 0; i < inputs_; ++i) gw[i] += d * row[i];
      g_b1[h] += d;
    }
  }
  const double n = static_cast<double>(rows.size());
  if (want_grad) {
    for (double& g : gradient) g /= n;
  }
  return total / n;
}

double Network::predict(std::span<const double> row) const {
  std::vector<double> pre(hidden_), act(hidden_), out(outputs_);
  const double value = forward(row, pre, act, out);
  if (!softmax_) return value;
  return static_cast<double>(std::max_element(out.begin(), out.end()) - out.begin());
}

double MlpModel::predict(std::span<const double> raw_row) const {
  std::vector<double> row(raw_row.size());
  for (std::size_t j = 0; j < row.size(); ++j) {
    row[j] = (raw_row[j] - scaler.mean[j]) / scaler.scale[j];
  }
  const double out = network.predict(row);
  return problem_type == ProblemType::Regression ? out * target_scale + target_mean : out;
}

MlpModel fit_mlp(const Dataset& dataset, std::span<const std::size_t> train_rows,
                 const MlpConfig& config, std::uint64_t seed, std::size_t fold_id) {
  config.validate();
  if (train_rows.size() < 2) throw std::invalid_argument("need at least two training rows");
  const bool classification = dataset.problem_type() == ProblemType::Classification;
  Rng rng(seed);

  std::vector<std::size_t> order(train_rows.begin(), train_rows.end());
  rng.shuffle(std::span<std::size_t>(order));

  const Standardizer scaler = Standardizer::fit(dataset.features(), train_rows);
  const Matrix x = scaler.apply(dataset.features(), order);

  double target_mean = 0.0;
  double target_scale = 1.0;
  std::vector<double> targets(order.size());
  if (classification) {
    for (std::size_t i = 0; i < order.size(); ++i) targets[i] = dataset.target()[order[i]];
  } else {
    for (std::size_t r : train_rows) target_mean += dataset.target()[r];
    target_mean /= static_cast<double>(train_rows.size());
    double var = 0.0;
    for (std::size_t r : train_rows) {
      const double d = dataset.target()[r] - target_mean;
      var += d * d;
    }
    const double sd = std::sqrt(var / static_cast<double>(train_rows.size()));
    target_scale = sd > 0.0 ? sd : 1.0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      targets[i] = (dataset.target()[order[i]] - target_mean) / target_scale;
    }
  }

  const std::size_t n_train = order.size();
  const std::size_t n_val = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::ceil(config.validation_fraction * static_cast<double>(n_train))),
      1, n_train - 1);
  std::vector<std::size_t> fit_rows(n_train - n_val);
  std::iota(fit_rows.begin(), fit_rows.end(), std::size_t{0});
  std::vector<std::size_t> val_rows(n_val);
  std::iota(val_rows.begin(), val_rows.end(), n_train - n_val);

  const std::size_t inputs = dataset.n_features();
  Network net(inputs, hidden_units(inputs, config.hidden_multiplier),
              classification ? dataset.n_classes() : 1, config.activation, classification);
  net.init_random(rng, /*zero_output=*/true);

  std::vector<double> gradient(net.params().size());
  std::vector<double> best_params(net.params().begin(), net.params().end());
  double best_loss = net.loss(x, targets, val_rows);
  if (!std::isfinite(best_loss)) throw DivergenceError(fold_id, 0);

  std::size_t stale = 0;
  std::size_t epoch = 0;
  while (epoch < config.max_epochs) {
    ++epoch;
    rng.shuffle(std::span<std::size_t>(fit_rows));
    for (std::size_t start = 0; start < fit_rows.size(); start += config.batch_size) {
      const std::size_t stop = std::min(fit_rows.size(), start + config.batch_size);
      const double batch_loss = net.loss(
          x, targets, std::span<const std::size_t>(fit_rows).subspan(start, stop - start), gradient);
      if (!std::isfinite(batch_loss)) throw DivergenceError(fold_id, epoch);
      auto params = net.params();
      for (std::size_t p = 0; p < params.size(); ++p) {
        params[p] -= config.learning_rate * gradient[p];
      }
    }
    const double val_loss = net.loss(x, targets, val_rows);
    if (!std::isfinite(val_loss)) throw DivergenceError(fold_id, epoch);
    if (val_loss < best_loss - config.tol * std::abs(best_loss)) {
      best_loss = val_loss;
      std::copy(net.params().begin(), net.params().end(), best_params.begin());
      stale = 0;
    } else if (++stale >= config.patience) {
      break;
    }
  }
  std::copy(best_params.begin(), best_params.end(), net.params().begin());

  return MlpModel{std::move(net), scaler, target_mean, target_scale, epoch,
                  dataset.problem_type()};
}

std::vector<std::vector<std::size_t>> make_folds(const Dataset& dataset, std::size_t k,
                                                 std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("need at least two folds");
  if (dataset.n_rows() < k) {
    throw std::invalid_argument("cannot split " + std::to_string(dataset.n_rows()) +
                                " rows into " + std::to_string(k) + " folds");
  }
  Rng rng(derive_seed(seed, kSplitStream));
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t slot = 0;
  if (dataset.problem_type() == ProblemType::Classification) {
    std::vector<std::vector<std::size_t>> by_class(dataset.n_classes());
    for (std::size_t r = 0; r < dataset.n_rows(); ++r) by_class[dataset.label(r)].push_back(r);
    for (auto& rows : by_class) {
      rng.shuffle(std::span<std::size_t>(rows));
      for (std::size_t r : rows) folds[slot++ % k].push_back(r);
    }
  } else {
    std::vector<std::size_t> rows(dataset.n_rows());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(rows));
    for (std::size_t r : rows) folds[slot++ % k].push_back(r);
  }
  for (auto& fold : folds) std::sort(fold.begin(), fold.end());
  return folds;
}

double r2_score(std::span<const double> truth, std::span<const double> predicted) {
  if (truth.empty()) return 0.0;
  const double mean =
      std::accumulate(truth.begin(), truth.end(), 0.0) / static_cast<double>(truth.size());
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ss_res += (truth[i] - predicted[i]) * (truth[i] - predicted[i]);
    ss_tot += (truth[i] - mean) * (truth[i] - mean);
  }
  return ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;
}

CvResult evaluate(const Dataset& dataset, const MlpConfig& config) {
  config.validate();
  const bool classification = dataset.problem_type() == ProblemType::Classification;
  const auto folds = make_folds(dataset, config.k_folds, config.seed);
  const std::size_t k = folds.size();

  std::vector<std::vector<std::size_t>> train(k);
  for (std::size_t f = 0; f < k; ++f) {
    for (std::size_t g = 0; g < k; ++g) {
      if (g != f) train[f].insert(train[f].end(), folds[g].begin(), folds[g].end());
    }
    std::sort(train[f].begin(), train[f].end());
    if (classification) {
      std::vector<bool> seen(dataset.n_classes(), false);
      for (std::size_t r : train[f]) seen[dataset.label(r)] = true;
      for (std::size_t c = 0; c < seen.size(); ++c) {
        if (!seen[c]) {
          throw std::invalid_argument("class " + std::to_string(c) +
                                      " is missing from the training split of fold " +
                                      std::to_string(f));
        }
      }
    }
  }

  CvResult result;
  result.score_kind = classification ? ScoreKind::Accuracy : ScoreKind::R2;
  result.fold_scores.assign(k, 0.0);
  result.epochs_run.assign(k, 0);
  parallel_for(k, [&](std::size_t f) {
    const MlpModel model = fit_mlp(dataset, train[f], config, derive_seed(config.seed, kFoldStream, f), f);
    result.epochs_run[f] = model.epochs_run;
    std::vector<double> truth;
    std::vector<double> predicted;
    for (std::size_t r : folds[f]) {
      truth.push_back(dataset.target()[r]);
      predicted.push_back(model.predict(dataset.features().row(r)));
    }
    if (classification) {
      std::size_t correct = 0;
      for (std::size_t i = 0; i < truth.size(); ++i) correct += truth[i] == predicted[i];
      result.fold_scores[f] = static_cast<double>(correct) / static_cast<double>(truth.size());
    } else {
      result.fold_scores[f] = r2_score(truth, predicted);
    }
  });

  result.mean_score = std::accumulate(result.fold_scores.begin(), result.fold_scores.end(), 0.0) /
                      static_cast<double>(k);
  result.best_score = *std::max_element(result.fold_scores.begin(), result.fold_scores.end());
  return result;
}

double gradient_check(const MlpConfig& config, const Dataset& probe,
                      const GradientCheckOptions& options) {
  if (probe.n_rows() > 20 || probe.n_features() > 5) {
    throw std::invalid_argument("gradient probe is limited to 20 rows and 5 features");
  }
  const bool classification = probe.problem_type() == ProblemType::Classification;
  Network net(probe.n_features(), hidden_units(probe.n_features(), config.hidden_multiplier),
              classification ? probe.n_classes() : 1, config.activation, classification);
  if (options.zero_init) {
    net.init_zero();
  } else {
    Rng rng(config.seed);
    net.init_random(rng);
  }

  std::vector<std::size_t> rows(probe.n_rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  const Matrix& x = probe.features();
  const auto& y = probe.target();

  std::vector<double> analytic(net.params().size());
  net.loss(x, y, rows, analytic);

  double worst = 0.0;
  auto params = net.params();
  for (std::size_t p = 0; p < params.size(); ++p) {
    const double saved = params[p];
    params[p] = saved + options.step;
    const double up = net.loss(x, y, rows);
    params[p] = saved - options.step;
    const double down = net.loss(x, y, rows);
    params[p] = saved;
    const double numeric = (up - down) / (2.0 * options.step);
    const double denom = std::max({std::abs(analytic[p]), std::abs(numeric), options.floor});
    worst = std::max(worst, std::abs(analytic[p] - numeric) / denom);
  }
  return worst;
}

}  // namespace dimcut
