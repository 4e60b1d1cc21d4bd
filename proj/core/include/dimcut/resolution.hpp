#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dimcut/importance.hpp"

namespace dimcut {

/// Descending importances with their original feature indices. Produced by
/// prune_tail; values keep their share of the ORIGINAL total (no
/// renormalization after pruning).
struct RankedImportance {
  std::vector<double> values;
  std::vector<std::size_t> features;

  static RankedImportance from(const ImportanceVector& importance);
  std::size_t size() const noexcept { return values.size(); }
};

/// One candidate cut in automatic mode, on scaled importances.
struct CutScore {
  std::size_t position = 0;  // keep the first `position` entries
  double resolution = 0.0;   // cumulative scaled importance through position
  double weighted_gap = 0.0; // squared drop to the next entry
  double total = 0.0;

  friend bool operator==(const CutScore&, const CutScore&) = default;
};

struct CutDecision {
  enum class Mode { UserTarget, Auto };

  std::size_t n_kept = 0;
  double achieved_resolution = 0.0;
  Mode mode = Mode::Auto;
  /// Set in UserTarget mode.
  std::optional<double> target;
  /// Auto mode diagnostics, one entry per cut position.
  std::vector<CutScore> scores;
  /// Original feature indices of the kept entries, most important first.
  std::vector<std::size_t> kept;

  friend bool operator==(const CutDecision&, const CutDecision&) = default;
};

/// Slack on cumulative-sum comparisons so that e.g. 0.35 + 0.30 + 0.15
/// counts as reaching 0.80.
inline constexpr double kResolutionSlack = 1e-9;

/// Thresholds of the tail-pruning rule.
struct PruneRule {
  double tail_start = 0.70;  // cumulative importance before the entry
  double min_importance = 0.03;
};

struct AutoCutOptions {
  /// Importances are multiplied by this before scoring.
  double scale = 10.0;
  PruneRule prune{};
};

/// Smallest prefix of the ranking whose cumulative importance reaches
/// `target`. Throws std::invalid_argument unless 0 < target < 1.
CutDecision select_by_target(const ImportanceVector& importance, double target);

/// Drops every entry whose preceding cumulative importance is at least
/// rule.tail_start and whose own importance is below rule.min_importance.
/// The first entry always survives.
RankedImportance prune_tail(const ImportanceVector& importance, const PruneRule& rule = {});

/// Automatic cut: prune the tail, scale, then keep the prefix length f in
/// [1, n-1] maximising sum(phi_1..phi_f) + (phi_f - phi_{f+1})^2. Ties go
/// to the smaller f. Achieved resolution uses unscaled values.
CutDecision auto_cut(const ImportanceVector& importance, const AutoCutOptions& options = {});

/// select_by_target when a target is given, auto_cut otherwise.
CutDecision choose_cut(const ImportanceVector& importance, std::optional<double> target,
                       const AutoCutOptions& options = {});

/// "position,lambda,weighted_gap,total" rows for plotting.
std::string format_cut_scores_csv(const CutDecision& decision);

}  // namespace dimcut
