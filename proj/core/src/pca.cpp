#include "dimcut/pca.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dimcut {

PcaModel fit_pca(const Dataset& dataset, const PcaOptions& options) {
  const std::size_t n = dataset.n_rows();
  const std::size_t f = dataset.n_features();
  if (n < 2) throw std::invalid_argument("PCA needs at least two rows");
  const Matrix& x = dataset.features();

  PcaModel model;
  model.mean.assign(f, 0.0);
  model.scale.assign(f, 1.0);
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = x.row(r);
    for (std::size_t j = 0; j < f; ++j) model.mean[j] += row[j];
  }
  for (double& m : model.mean) m /= static_cast<double>(n);

  Eigen::MatrixXd centred(n, f);
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = x.row(r);
    for (std::size_t j = 0; j < f; ++j) {
      centred(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = row[j] - model.mean[j];
    }
  }
  if (!centred.allFinite()) throw std::invalid_argument("PCA input contains non-finite values");

  if (options.standardize) {
    for (std::size_t j = 0; j < f; ++j) {
      const auto col = centred.col(static_cast<Eigen::Index>(j));
      const double sd = std::sqrt(col.squaredNorm() / static_cast<double>(n - 1));
      model.scale[j] = sd > 0.0 ? sd : 1.0;
      centred.col(static_cast<Eigen::Index>(j)) /= model.scale[j];
    }
  }

  const Eigen::MatrixXd covariance =
      (centred.transpose() * centred) / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("covariance eigendecomposition did not converge");
  }

  // Eigen returns ascending eigenvalues; reverse and clamp round-off negatives.
  model.components = Matrix(f, f);
  model.explained_variance.resize(f);
  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();
  for (std::size_t k = 0; k < f; ++k) {
    const auto src = static_cast<Eigen::Index>(f - 1 - k);
    model.explained_variance[k] = std::max(0.0, values(src));
    std::size_t pivot = 0;
    for (std::size_t j = 1; j < f; ++j) {
      if (std::abs(vectors(static_cast<Eigen::Index>(j), src)) >
          std::abs(vectors(static_cast<Eigen::Index>(pivot), src))) {
        pivot = j;
      }
    }
    const double sign = vectors(static_cast<Eigen::Index>(pivot), src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < f; ++j) {
      model.components(j, k) = sign * vectors(static_cast<Eigen::Index>(j), src);
    }
  }

  double trace = 0.0;
  for (double v : model.explained_variance) trace += v;
  model.explained_variance_ratio.resize(f);
  if (trace > 0.0) {
    for (std::size_t k = 0; k < f; ++k) {
      model.explained_variance_ratio[k] = model.explained_variance[k] / trace;
    }
  } else {
    // Constant data: every direction is equally (un)informative.
    std::fill(model.explained_variance_ratio.begin(), model.explained_variance_ratio.end(),
              1.0 / static_cast<double>(f));
  }
  return model;
}

ImportanceVector pca_importance(const PcaModel& model) {
  return ImportanceVector(model.explained_variance_ratio, ImportanceSource::Pca);
}

Matrix transform(const PcaModel& model, const Matrix& features, std::size_t n_components) {
  const std::size_t f = model.n_features();
  if (features.cols() != f) throw std::invalid_argument("feature count does not match PCA model");
  if (n_components < 1 || n_components > f) {
    throw std::out_of_range("n_components must lie in [1, " + std::to_string(f) + "]");
  }
  Matrix out(features.rows(), n_components);
  std::vector<double> centred(f);
  for (std::size_t r = 0; r < features.rows(); ++r) {
    const auto row = features.row(r);
    for (std::size_t j = 0; j < f; ++j) centred[j] = (row[j] - model.mean[j]) / model.scale[j];
    auto dst = out.row(r);
    for (std::size_t k = 0; k < n_components; ++k) {
      double acc = 0.0;
      for (std::size_t j = 0; j < f; ++j) acc += centred[j] * model.components(j, k);
      dst[k] = acc;
    }
  }
  return out;
}

Dataset project(const PcaModel& model, const Dataset& dataset, std::size_t n_components) {
  Matrix scores = transform(model, dataset.features(), n_components);
  std::vector<std::string> names(n_components);
  for (std::size_t k = 0; k < n_components; ++k) names[k] = "PC" + std::to_string(k + 1);
  return dataset.with_features(std::move(names), std::move(scores));
}

}  // namespace dimcut
