#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "dimcut/forest.hpp"
#include "dimcut/importance.hpp"
#include "dimcut/mlp.hpp"
#include "dimcut/pca.hpp"
#include "dimcut/resolution.hpp"
#include "dimcut/tabular.hpp"

namespace dimcut {

enum class Method { Selection, Extraction };

/// "SELECTION" / "EXTRACTION".
std::string_view to_string(Method method) noexcept;
Method parse_method(std::string_view text);

struct PipelineConfig {
  double interpretability_weight = 0.5;
  double integrity_weight = 0.5;
  /// Unset: automatic cut on both pipelines.
  std::optional<double> target_resolution;
  ForestConfig forest{};
  MlpConfig mlp{};
  AutoCutOptions auto_cut{};
  PcaOptions pca{};
  /// Feed the best fold score instead of the CV mean into the decision.
  bool use_best_fold = false;
  std::uint64_t seed = 1;

  /// Weights in [0, 1] summing to 1 (within 1e-9); target in (0, 1).
  void validate() const;
};

struct Decision {
  double interpretability_score = 0.0;
  double integrity_score = 0.0;
  Method method = Method::Selection;
};

/// interpret = w_interp * s_fs, integ = w_integ * s_fe; Selection wins ties.
Decision decide(double s_fs, double s_fe, double w_interp, double w_integ);

/// Either the kept feature columns or a PCA projection, plus the cut.
struct ReductionPlan {
  Method method = Method::Selection;
  std::vector<std::size_t> kept_features;  // Selection
  std::size_t n_components = 0;            // Extraction
  std::optional<PcaModel> model;           // Extraction
  CutDecision cut;

  Dataset apply(const Dataset& dataset) const;
};

/// Everything a reader needs to audit the choice, in the order: forest
/// importances, PCA importances, selection score, extraction score,
/// interpretability score, integrity score, chosen method, kept feature
/// count, kept component count, reached resolution.
struct DecisionReport {
  ProblemType problem_type = ProblemType::Regression;
  std::size_t n_rows = 0;
  std::vector<std::string> feature_names;
  double interpretability_weight = 0.5;
  double integrity_weight = 0.5;
  std::optional<double> target_resolution;
  std::uint64_t seed = 1;

  ImportanceVector rf_importance{{1.0}, ImportanceSource::Forest};
  ImportanceVector pca_importance{{1.0}, ImportanceSource::Pca};
  CutDecision selection_cut;
  CutDecision extraction_cut;
  CvResult selection_cv;
  CvResult extraction_cv;
  /// The values fed into the decision (CV mean, or best fold).
  double mlp_accuracy_selection = 0.0;
  double mlp_accuracy_extraction = 0.0;
  double interpretability_score = 0.0;
  double integrity_score = 0.0;
  Method chosen_method = Method::Selection;
  std::size_t n_kept = 0;
  double achieved_resolution = 0.0;
  /// Not part of the key-value serialization; written via save_csv.
  std::optional<Dataset> reduced_dataset;

  std::size_t n_features() const noexcept { return feature_names.size(); }
  std::vector<std::string> reduced_names() const;

  friend bool operator==(const DecisionReport&, const DecisionReport&) = default;
};

/// Wall-clock time per pipeline stage.
struct PhaseTimings {
  double forest = 0.0;
  double pca = 0.0;
  double mlp_selection = 0.0;
  double mlp_extraction = 0.0;
  double decision = 0.0;
  double total = 0.0;
};

/// Runs the selection pipeline (forest importance, cut, MLP) and the
/// extraction pipeline (PCA importance, cut, projection, MLP), then decides.
/// Each pipeline cuts on its own importance vector with the same rule.
DecisionReport run_pipeline(const Dataset& dataset, const PipelineConfig& config,
                            PhaseTimings* timings = nullptr);

}  // namespace dimcut
