#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dimcut {

enum class ProblemType { Regression, Classification };

std::string_view to_string(ProblemType type) noexcept;
/// Accepts "regression" / "classification" (case-insensitive).
ProblemType parse_problem_type(std::string_view text);

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }
  std::vector<double> column(std::size_t c) const;

  std::span<const double> values() const noexcept { return data_; }
  std::span<double> values() noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Supervised tabular data: named feature columns plus one target column.
///
/// Construction validates the invariants (at least one feature and two rows,
/// unique names, matching target length, integer class labels covering every
/// class in [0, n_classes) for classification). Instances are immutable.
class Dataset {
 public:
  Dataset(std::vector<std::string> feature_names, Matrix features,
          std::vector<double> target, ProblemType problem_type,
          std::string target_name = "target");

  const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
  const Matrix& features() const noexcept { return features_; }
  const std::vector<double>& target() const noexcept { return target_; }
  const std::string& target_name() const noexcept { return target_name_; }
  ProblemType problem_type() const noexcept { return problem_type_; }

  std::size_t n_rows() const noexcept { return features_.rows(); }
  std::size_t n_features() const noexcept { return features_.cols(); }
  /// Number of classes; 0 for regression.
  std::size_t n_classes() const noexcept { return n_classes_; }
  std::size_t label(std::size_t row) const noexcept {
    return static_cast<std::size_t>(target_[row]);
  }

  /// Keeps the given columns in the given order; target carried over.
  Dataset select_columns(std::span<const std::size_t> columns) const;
  /// Replaces the feature block; target carried over.
  Dataset with_features(std::vector<std::string> names, Matrix features) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<std::string> feature_names_;
  Matrix features_;
  std::vector<double> target_;
  ProblemType problem_type_;
  std::string target_name_;
  std::size_t n_classes_ = 0;
};

/// CSV parse failure. row and column are 1-based positions in the file
/// (the header is row 1); either is 0 when not applicable.
class CsvError : public std::runtime_error {
 public:
  CsvError(const std::string& message, std::size_t row = 0, std::size_t column = 0);
  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

Dataset parse_csv(std::string_view text, ProblemType problem_type);
Dataset load_csv(const std::filesystem::path& path, ProblemType problem_type);

/// Shortest round-trip decimal text, LF line endings, target last.
std::string format_csv(const Dataset& dataset);
/// Writes atomically (temporary file plus rename).
void save_csv(const Dataset& dataset, const std::filesystem::path& path);

struct SynthSpec {
  ProblemType problem_type = ProblemType::Regression;
  std::size_t n_rows = 500;
  std::size_t n_features = 5;
  /// 0 means "all features informative".
  std::size_t n_informative = 0;
  /// Regression only: standard deviation of the additive noise.
  double noise_scale = 10.0;
  /// Classification only.
  std::size_t n_classes = 2;
  std::uint64_t seed = 1;

  std::size_t informative() const noexcept {
    return n_informative == 0 ? n_features : n_informative;
  }
  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
};

/// Parses "regression,500,5" or "classification,10000,100,seed=1,classes=3".
/// Optional keys: seed, informative, noise, classes.
SynthSpec parse_synth_spec(std::string_view text);

/// Regression data: x ~ N(0, I); y = x . w + N(0, noise_scale^2) where the
/// first n_informative weights are U[1, 100] and the rest are zero.
/// Also returns the weights through `weights` when non-null.
Dataset make_regression(const SynthSpec& spec, std::vector<double>* weights = nullptr);

/// Classification data: each class is a unit-variance Gaussian centred on a
/// distinct vertex of the {-1, +1}^n_informative hypercube; remaining
/// features are N(0, 1) noise. Class sizes differ by at most one.
/// Vertices are chosen greedily to maximise the minimum Hamming distance.
Dataset make_classification(const SynthSpec& spec,
                            std::vector<std::vector<double>>* centroids = nullptr);

/// Dispatches on spec.problem_type.
Dataset make_dataset(const SynthSpec& spec);

}  // namespace dimcut
