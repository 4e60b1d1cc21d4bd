#pragma once

#include <cstddef>
#include <vector>

#include "dimcut/importance.hpp"
#include "dimcut/tabular.hpp"

namespace dimcut {

struct PcaOptions {
  /// Divide each centred column by its sample standard deviation before the
  /// decomposition. Off by default: plain covariance PCA.
  bool standardize = false;
};

/// Principal axes of the feature covariance matrix. The target is ignored.
struct PcaModel {
  std::vector<double> mean;
  /// Per-feature divisor applied after centring (all ones unless
  /// standardized).
  std::vector<double> scale;
  /// n_features x n_features; column k is the k-th principal axis. Columns
  /// are orthonormal, ordered by descending eigenvalue, and sign-fixed so
  /// that the largest-magnitude loading is positive.
  Matrix components;
  std::vector<double> explained_variance;
  std::vector<double> explained_variance_ratio;

  std::size_t n_features() const noexcept { return mean.size(); }
};

/// Eigendecomposition of the sample covariance (divisor n_rows - 1).
PcaModel fit_pca(const Dataset& dataset, const PcaOptions& options = {});

/// Explained-variance ratios as an importance vector (already descending).
ImportanceVector pca_importance(const PcaModel& model);

/// Scores of the first n_components axes, named PC1..PCn; target unchanged.
Dataset project(const PcaModel& model, const Dataset& dataset, std::size_t n_components);

/// Centred (and scaled) rows times the first n_components axes.
Matrix transform(const PcaModel& model, const Matrix& features, std::size_t n_components);

}  // namespace dimcut
