#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "dimcut/decision.hpp"

namespace dimcut {

/// Human-readable justification block, scores rounded to 3 decimals.
std::string render_report(const DecisionReport& report);

/// Flat "key = value" text, one key per line, lists comma-separated, reals
/// in shortest round-trip form. Keys:
///
///   problem_type, n_rows, n_features, feature_names, seed,
///   interpretability_weight, integrity_weight, target_resolution ("auto"
///   when unset), rf_importance, pca_importance (per original index),
///   selection_cut_mode, selection_n_kept, selection_kept,
///   selection_resolution, extraction_cut_mode, extraction_n_kept,
///   extraction_resolution, selection_fold_scores, selection_epochs,
///   extraction_fold_scores, extraction_epochs, mlp_accuracy_selection,
///   mlp_accuracy_selection_mean, mlp_accuracy_selection_best,
///   mlp_accuracy_extraction, mlp_accuracy_extraction_mean,
///   mlp_accuracy_extraction_best, interpretability_score, integrity_score,
///   chosen_method, n_selected_features, n_principal_components, n_kept,
///   achieved_resolution, reduced_columns, reduced_dataset.
std::string to_key_value(const DecisionReport& report,
                         std::string_view reduced_dataset_file = "reduced.csv");

/// Inverse of to_key_value. reduced_dataset stays empty; auto-cut score
/// diagnostics are recomputed from the importance vectors. Throws
/// std::invalid_argument on a malformed document.
DecisionReport parse_key_value(std::string_view text);

/// "rank,feature,index,importance,cumulative,kept" rows in descending order.
std::string format_importance_csv(const ImportanceVector& importance,
                                  const std::vector<std::string>& names,
                                  const CutDecision& cut);

}  // namespace dimcut
