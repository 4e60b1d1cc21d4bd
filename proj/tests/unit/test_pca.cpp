#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "dimcut/pca.hpp"
#include "dimcut/rng.hpp"

using namespace dimcut;

namespace {

Dataset from_columns(const std::vector<std::vector<double>>& cols) {
  const std::size_t rows = cols.front().size();
  Matrix x(rows, cols.size());
  std::vector<std::string> names;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    names.push_back("x" + std::to_string(j));
    for (std::size_t r = 0; r < rows; ++r) x(r, j) = cols[j][r];
  }
  return Dataset(names, x, std::vector<double>(rows, 0.0), ProblemType::Regression);
}

Dataset gaussian(std::size_t rows, std::size_t features, std::uint64_t seed,
                 std::vector<double> stds = {}) {
  Rng rng(seed);
  std::vector<std::vector<double>> cols(features, std::vector<double>(rows));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j < features; ++j) {
      cols[j][r] = (j < stds.size() ? stds[j] : 1.0) * rng.normal() + static_cast<double>(j);
    }
  }
  return from_columns(cols);
}

double sample_variance(const std::vector<double>& v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s / (v.size() - 1);
}

// Covariance computed directly from its definition.
std::vector<std::vector<double>> covariance(const Matrix& x) {
  const std::size_t n = x.rows(), f = x.cols();
  std::vector<double> mean(f, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t j = 0; j < f; ++j) mean[j] += x(r, j) / n;
  }
  std::vector<std::vector<double>> c(f, std::vector<double>(f, 0.0));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t a = 0; a < f; ++a) {
      for (std::size_t b = 0; b < f; ++b) c[a][b] += (x(r, a) - mean[a]) * (x(r, b) - mean[b]);
    }
  }
  for (auto& row : c) {
    for (double& v : row) v /= static_cast<double>(n - 1);
  }
  return c;
}

}  // namespace

TEST_CASE("rank-1 data gives ratios [1, 0]") {
  Rng rng(1);
  std::vector<double> a(200), b(200);
  for (std::size_t r = 0; r < 200; ++r) {
    a[r] = rng.normal();
    b[r] = 2.0 * a[r];
  }
  const Dataset d = from_columns({a, b});
  const PcaModel model = fit_pca(d);
  CHECK(model.explained_variance_ratio[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(model.explained_variance_ratio[1]) <= 1e-9);
  const ImportanceVector imp = pca_importance(model);
  CHECK(imp.scores()[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(imp.source() == ImportanceSource::Pca);

  const Dataset pc1 = project(model, d, 1);
  const double total = sample_variance(a) + sample_variance(b);
  CHECK(sample_variance(pc1.features().column(0)) == doctest::Approx(total).epsilon(1e-9));
  // Axis is (1, 2)/sqrt(5) with a positive largest loading.
  CHECK(model.components(0, 0) == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-9));
  CHECK(model.components(1, 0) == doctest::Approx(2.0 / std::sqrt(5.0)).epsilon(1e-9));
}

TEST_CASE("isotropic data splits variance evenly") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const PcaModel model = fit_pca(gaussian(10000, 2, seed));
    for (double r : model.explained_variance_ratio) {
      CHECK(r >= 0.45);
      CHECK(r <= 0.55);
    }
  }
}

TEST_CASE("eigenpairs satisfy the covariance equation") {
  const Dataset d = gaussian(300, 6, 3, {3.0, 0.5, 2.0, 1.0, 0.1, 1.5});
  const PcaModel model = fit_pca(d);
  const auto c = covariance(d.features());
  const std::size_t f = 6;
  double trace = 0.0;
  for (std::size_t j = 0; j < f; ++j) trace += c[j][j];
  for (std::size_t k = 0; k < f; ++k) {
    for (std::size_t a = 0; a < f; ++a) {
      double cv = 0.0;
      for (std::size_t b = 0; b < f; ++b) cv += c[a][b] * model.components(b, k);
      CHECK(cv == doctest::Approx(model.explained_variance[k] * model.components(a, k))
                      .epsilon(1e-8)
                      .scale(1.0));
    }
    CHECK(model.explained_variance_ratio[k] ==
          doctest::Approx(model.explained_variance[k] / trace).epsilon(1e-12));
  }
}

TEST_CASE("components are orthonormal and sign-fixed") {
  const PcaModel model = fit_pca(gaussian(500, 8, 5, {1, 2, 3, 4, 5, 6, 7, 8}));
  const std::size_t f = 8;
  for (std::size_t i = 0; i < f; ++i) {
    for (std::size_t j = 0; j < f; ++j) {
      double dot = 0.0;
      for (std::size_t a = 0; a < f; ++a) dot += model.components(a, i) * model.components(a, j);
      CHECK(std::abs(dot - (i == j ? 1.0 : 0.0)) <= 1e-8);
    }
    std::size_t argmax = 0;
    for (std::size_t a = 1; a < f; ++a) {
      if (std::abs(model.components(a, i)) > std::abs(model.components(argmax, i))) argmax = a;
    }
    CHECK(model.components(argmax, i) > 0.0);
  }
}

TEST_CASE("ratios sum to one and are nonincreasing") {
  SynthSpec spec;
  spec.problem_type = ProblemType::Classification;
  spec.n_rows = 500;
  spec.n_features = 25;
  const ImportanceVector imp = pca_importance(fit_pca(make_classification(spec)));
  REQUIRE(imp.size() == 25);
  CHECK(std::accumulate(imp.scores().begin(), imp.scores().end(), 0.0) ==
        doctest::Approx(1.0).epsilon(1e-9));
  for (std::size_t i = 0; i + 1 < 25; ++i) {
    CHECK(imp.scores()[i] >= imp.scores()[i + 1]);
    CHECK(imp.order()[i] == i);
  }
}

TEST_CASE("full projection reconstructs centred data") {
  const Dataset d = gaussian(400, 5, 9, {2, 1, 4, 0.5, 3});
  const PcaModel model = fit_pca(d);
  const Dataset p = project(model, d, 5);
  CHECK(p.feature_names() == std::vector<std::string>{"PC1", "PC2", "PC3", "PC4", "PC5"});
  CHECK(p.target() == d.target());
  CHECK(p.n_rows() == d.n_rows());
  double max_err = 0.0;
  for (std::size_t r = 0; r < d.n_rows(); ++r) {
    for (std::size_t a = 0; a < 5; ++a) {
      double back = 0.0;
      for (std::size_t k = 0; k < 5; ++k) back += p.features()(r, k) * model.components(a, k);
      max_err = std::max(max_err, std::abs(back - (d.features()(r, a) - model.mean[a])));
    }
  }
  CHECK(max_err <= 1e-8);
  for (std::size_t k = 0; k < 5; ++k) {
    CHECK(sample_variance(p.features().column(k)) ==
          doctest::Approx(model.explained_variance[k]).epsilon(1e-8));
  }
  CHECK(sample_variance(p.features().column(0)) >= sample_variance(p.features().column(1)));
}

TEST_CASE("dominant axis is recovered after a rotation") {
  Rng rng(12);
  const std::size_t n = 10000;
  const std::vector<double> axis{0.48, -0.6, 0.64};  // unit length
  std::vector<std::vector<double>> cols(3, std::vector<double>(n));
  for (std::size_t r = 0; r < n; ++r) {
    const double big = 5.0 * rng.normal();
    for (std::size_t j = 0; j < 3; ++j) cols[j][r] = big * axis[j] + rng.normal();
  }
  const PcaModel model = fit_pca(from_columns(cols));
  double cosine = 0.0;
  for (std::size_t j = 0; j < 3; ++j) cosine += axis[j] * model.components(j, 0);
  CHECK(std::abs(cosine) >= 0.99);
}

TEST_CASE("projection bounds and standardization") {
  const Dataset d = gaussian(50, 3, 2, {10, 1, 1});
  const PcaModel model = fit_pca(d);
  CHECK_THROWS(project(model, d, 0));
  CHECK_THROWS(project(model, d, 4));
  PcaOptions opts;
  opts.standardize = true;
  const PcaModel scaled = fit_pca(d, opts);
  double total = 0.0;
  for (double v : scaled.explained_variance) total += v;
  CHECK(total == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(model.explained_variance_ratio[0] > scaled.explained_variance_ratio[0]);
}
