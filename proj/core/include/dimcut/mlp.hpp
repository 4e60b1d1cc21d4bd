#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "dimcut/rng.hpp"
#include "dimcut/tabular.hpp"

namespace dimcut {

enum class Activation { ReLU, Tanh };

std::string_view to_string(Activation activation) noexcept;

/// Single-hidden-layer perceptron trained by plain mini-batch SGD.
/// Defaults follow the reference architecture table; the rest (activation,
/// batch size, patience, validation split) are documented choices.
struct MlpConfig {
  double learning_rate = 0.001;
  /// Minimum relative improvement of the validation loss that resets the
  /// patience counter.
  double tol = 0.0001;
  std::size_t max_epochs = 100000;
  std::size_t patience = 10;
  std::size_t k_folds = 10;
  double hidden_multiplier = 1.2;
  std::size_t batch_size = 32;
  /// Share of each training split held back to drive early stopping.
  double validation_fraction = 0.1;
  std::uint64_t seed = 1;
  Activation activation = Activation::ReLU;

  void validate() const;
};

/// round-half-to-even(multiplier * n_inputs), at least 2.
std::size_t hidden_units(std::size_t n_inputs, double multiplier);

enum class ScoreKind { R2, Accuracy };

struct CvResult {
  std::vector<double> fold_scores;
  double mean_score = 0.0;
  double best_score = 0.0;
  ScoreKind score_kind = ScoreKind::R2;
  std::vector<std::size_t> epochs_run;

  friend bool operator==(const CvResult&, const CvResult&) = default;
};

/// Raised when the training loss stops being finite.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::size_t fold, std::size_t epoch);
  std::size_t epoch() const noexcept { return epoch_; }

 private:
  std::size_t epoch_;
};

/// Per-column mean and standard deviation estimated on a subset of rows.
/// Zero spread maps to a divisor of 1.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  static Standardizer fit(const Matrix& x, std::span<const std::size_t> rows);
  /// The selected rows, standardized, in the given order.
  Matrix apply(const Matrix& x, std::span<const std::size_t> rows) const;
};

/// Network weights and the forward/backward passes.
///
/// Parameters are stored flat: W1 (hidden x inputs, row-major), b1, W2
/// (outputs x hidden), b2. Regression uses one linear output and mean
/// squared error; classification uses softmax outputs and mean
/// cross-entropy.
class Network {
 public:
  Network(std::size_t inputs, std::size_t hidden, std::size_t outputs, Activation activation,
          bool softmax_output);

  /// He-style uniform initialisation scaled by fan-in; biases start at 0.
  /// zero_output also zeroes the output layer (used for training).
  void init_random(Rng& rng, bool zero_output = false);
  void init_zero();

  std::size_t inputs() const noexcept { return inputs_; }
  std::size_t hidden() const noexcept { return hidden_; }
  std::size_t outputs() const noexcept { return outputs_; }
  bool softmax_output() const noexcept { return softmax_; }

  std::span<double> params() noexcept { return params_; }
  std::span<const double> params() const noexcept { return params_; }

  /// Mean loss over `rows` of x. `targets` holds a real value (regression)
  /// or class index per row of x. When gradient is non-empty it receives
  /// d(loss)/d(params) (same layout as params()).
  double loss(const Matrix& x, std::span<const double> targets,
              std::span<const std::size_t> rows, std::span<double> gradient = {}) const;

  /// Regression output, or the argmax class.
  double predict(std::span<const double> row) const;

 private:
  double forward(std::span<const double> row, std::span<double> pre, std::span<double> act,
                 std::span<double> out) const;

  std::size_t inputs_;
  std::size_t hidden_;
  std::size_t outputs_;
  Activation activation_;
  bool softmax_;
  std::vector<double> params_;
};

/// A trained network together with the preprocessing fitted on its
/// training rows.
struct MlpModel {
  Network network;
  Standardizer scaler;
  double target_mean = 0.0;
  double target_scale = 1.0;
  std::size_t epochs_run = 0;
  ProblemType problem_type = ProblemType::Regression;

  double predict(std::span<const double> raw_row) const;
};

/// Trains on `train_rows` of the dataset. A validation_fraction tail of the
/// (shuffled) training rows drives early stopping; the weights with the
/// best validation loss are kept.
MlpModel fit_mlp(const Dataset& dataset, std::span<const std::size_t> train_rows,
                 const MlpConfig& config, std::uint64_t seed, std::size_t fold_id = 0);

/// k held-out folds. Classification folds are stratified by class.
std::vector<std::vector<std::size_t>> make_folds(const Dataset& dataset, std::size_t k,
                                                 std::uint64_t seed);

/// R^2 with the convention that a zero-variance truth scores 0.
double r2_score(std::span<const double> truth, std::span<const double> predicted);

/// k-fold cross-validated R^2 (regression) or accuracy (classification).
CvResult evaluate(const Dataset& dataset, const MlpConfig& config);

struct GradientCheckOptions {
  double step = 1e-5;
  /// Denominator floor, so exact-zero gradients compare absolutely.
  double floor = 1e-6;
  bool zero_init = false;
};

/// Max relative error between back-propagated and central-difference
/// gradients over all weights, on the full probe set.
double gradient_check(const MlpConfig& config, const Dataset& probe,
                      const GradientCheckOptions& options = {});

}  // namespace dimcut
