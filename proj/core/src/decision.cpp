#include "dimcut/decision.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dimcut/rng.hpp"

namespace dimcut {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_weight(double w, const char* name) {
  if (!(w >= 0.0 && w <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
  }
}

constexpr std::uint64_t kForestStream = 0x666f72657374ULL;
constexpr std::uint64_t kMlpStream = 0x6d6c70ULL;

}  // namespace

std::string_view to_string(Method method) noexcept {
  return method == Method::Selection ? "SELECTION" : "EXTRACTION";
}

Method parse_method(std::string_view text) {
  if (text == "SELECTION") return Method::Selection;
  if (text == "EXTRACTION") return Method::Extraction;
  throw std::invalid_argument("unknown method '" + std::string(text) + "'");
}

void PipelineConfig::validate() const {
  check_weight(interpretability_weight, "interpretability weight");
  check_weight(integrity_weight, "integrity weight");
  if (std::abs(interpretability_weight + integrity_weight - 1.0) > 1e-9) {
    throw std::invalid_argument(
        "interpretability and integrity weights must follow the alpha / 1 - alpha pattern "
        "(sum to 1)");
  }
  if (target_resolution && !(*target_resolution > 0.0 && *target_resolution < 1.0)) {
    throw std::invalid_argument("target resolution must lie strictly between 0 and 1");
  }
  forest.validate();
  mlp.validate();
}

Decision decide(double s_fs, double s_fe, double w_interp, double w_integ) {
  check_weight(w_interp, "interpretability weight");
  check_weight(w_integ, "integrity weight");
  if (std::abs(w_interp + w_integ - 1.0) > 1e-9) {
    throw std::invalid_argument("weights must sum to 1");
  }
  Decision d;
  d.interpretability_score = w_interp * s_fs;
  d.integrity_score = w_integ * s_fe;
  d.method = d.interpretability_score >= d.integrity_score ? Method::Selection
                                                           : Method::Extraction;
  return d;
}

Dataset ReductionPlan::apply(const Dataset& dataset) const {
  if (method == Method::Selection) return dataset.select_columns(kept_features);
  if (!model) throw std::logic_error("extraction plan has no PCA model");
  return project(*model, dataset, n_components);
}

std::vector<std::string> DecisionReport::reduced_names() const {
  std::vector<std::string> names;
  if (chosen_method == Method::Selection) {
    for (std::size_t j : selection_cut.kept) names.push_back(feature_names[j]);
  } else {
    for (std::size_t k = 0; k < extraction_cut.n_kept; ++k) {
      names.push_back("PC" + std::to_string(k + 1));
    }
  }
  return names;
}

DecisionReport run_pipeline(const Dataset& dataset, const PipelineConfig& config,
                            PhaseTimings* timings) {
  config.validate();
  const auto total_start = Clock::now();
  PhaseTimings local;

  ForestConfig forest_config = config.forest;
  forest_config.seed = derive_seed(config.seed, kForestStream);
  MlpConfig mlp_config = config.mlp;
  mlp_config.seed = derive_seed(config.seed, kMlpStream);

  DecisionReport report;
  report.problem_type = dataset.problem_type();
  report.n_rows = dataset.n_rows();
  report.feature_names = dataset.feature_names();
  report.interpretability_weight = config.interpretability_weight;
  report.integrity_weight = config.integrity_weight;
  report.target_resolution = config.target_resolution;
  report.seed = config.seed;

  // Selection pipeline.
  auto start = Clock::now();
  const FittedForest forest = fit_forest(dataset, forest_config);
  report.rf_importance = feature_importance(forest);
  report.selection_cut =
      choose_cut(report.rf_importance, config.target_resolution, config.auto_cut);
  ReductionPlan selection;
  selection.method = Method::Selection;
  selection.kept_features = report.selection_cut.kept;
  selection.cut = report.selection_cut;
  const Dataset selected = selection.apply(dataset);
  local.forest = seconds_since(start);

  start = Clock::now();
  report.selection_cv = evaluate(selected, mlp_config);
  local.mlp_selection = seconds_since(start);

  // Extraction pipeline.
  start = Clock::now();
  PcaModel model = fit_pca(dataset, config.pca);
  report.pca_importance = pca_importance(model);
  report.extraction_cut =
      choose_cut(report.pca_importance, config.target_resolution, config.auto_cut);
  ReductionPlan extraction;
  extraction.method = Method::Extraction;
  extraction.n_components = report.extraction_cut.n_kept;
  extraction.cut = report.extraction_cut;
  extraction.model = std::move(model);
  const Dataset extracted = extraction.apply(dataset);
  local.pca = seconds_since(start);

  start = Clock::now();
  report.extraction_cv = evaluate(extracted, mlp_config);
  local.mlp_extraction = seconds_since(start);

  start = Clock::now();
  report.mlp_accuracy_selection =
      config.use_best_fold ? report.selection_cv.best_score : report.selection_cv.mean_score;
  report.mlp_accuracy_extraction =
      config.use_best_fold ? report.extraction_cv.best_score : report.extraction_cv.mean_score;
  const Decision d = decide(report.mlp_accuracy_selection, report.mlp_accuracy_extraction,
                            config.interpretability_weight, config.integrity_weight);
  report.interpretability_score = d.interpretability_score;
  report.integrity_score = d.integrity_score;
  report.chosen_method = d.method;
  const CutDecision& chosen =
      d.method == Method::Selection ? report.selection_cut : report.extraction_cut;
  report.n_kept = chosen.n_kept;
  report.achieved_resolution = chosen.achieved_resolution;
  report.reduced_dataset = d.method == Method::Selection ? selected : extracted;
  local.decision = seconds_since(start);

  local.total = seconds_since(total_start);
  if (timings) *timings = local;
  return report;
}

}  // namespace dimcut
