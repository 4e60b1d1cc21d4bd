#include "dimcut/resolution.hpp"

#include <stdexcept>

#include "dimcut/io.hpp"

namespace dimcut {

RankedImportance RankedImportance::from(const ImportanceVector& importance) {
  RankedImportance ranked;
  ranked.features = importance.order();
  ranked.values = importance.sorted();
  return ranked;
}

CutDecision select_by_target(const ImportanceVector& importance, double target) {
  if (!(target > 0.0 && target < 1.0)) {
    throw std::invalid_argument("target resolution must lie strictly between 0 and 1");
  }
  const auto ranked = RankedImportance::from(importance);
  CutDecision cut;
  cut.mode = CutDecision::Mode::UserTarget;
  cut.target = target;
  double cumulative = 0.0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    cumulative += ranked.values[i];
    cut.kept.push_back(ranked.features[i]);
    if (cumulative >= target - kResolutionSlack) break;
  }
  cut.n_kept = cut.kept.size();
  cut.achieved_resolution = cumulative;
  return cut;
}

RankedImportance prune_tail(const ImportanceVector& importance, const PruneRule& rule) {
  const auto ranked = RankedImportance::from(importance);
  RankedImportance kept;
  double before = 0.0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const double value = ranked.values[i];
    const bool in_tail = before >= rule.tail_start - kResolutionSlack;
    if (i == 0 || !(in_tail && value < rule.min_importance)) {
      kept.values.push_back(value);
      kept.features.push_back(ranked.features[i]);
    }
    before += value;
  }
  return kept;
}

CutDecision auto_cut(const ImportanceVector& importance, const AutoCutOptions& options) {
  const RankedImportance pruned = prune_tail(importance, options.prune);
  CutDecision cut;
  cut.mode = CutDecision::Mode::Auto;

  const std::size_t n = pruned.size();
  std::size_t best = 1;
  if (n >= 2) {
    double lambda = 0.0;
    double best_total = 0.0;
    for (std::size_t f = 1; f < n; ++f) {
      const double phi = options.scale * pruned.values[f - 1];
      const double next = options.scale * pruned.values[f];
      lambda += phi;
      const double gap = phi - next;
      CutScore score{f, lambda, gap * gap, lambda + gap * gap};
      if (f == 1 || score.total > best_total) {
        best_total = score.total;
        best = f;
      }
      cut.scores.push_back(score);
    }
  }

  cut.n_kept = best;
  cut.kept.assign(pruned.features.begin(), pruned.features.begin() + static_cast<std::ptrdiff_t>(best));
  double achieved = 0.0;
  for (std::size_t i = 0; i < best; ++i) achieved += pruned.values[i];
  cut.achieved_resolution = achieved;
  return cut;
}

CutDecision choose_cut(const ImportanceVector& importance, std::optional<double> target,
                       const AutoCutOptions& options) {
  return target ? select_by_target(importance, *target) : auto_cut(importance, options);
}

std::string format_cut_scores_csv(const CutDecision& decision) {
  std::string out = "position,lambda,weighted_gap,total\n";
  for (const auto& s : decision.scores) {
    out += std::to_string(s.position) + ',' + format_double(s.resolution) + ',' +
           format_double(s.weighted_gap) + ',' + format_double(s.total) + '\n';
  }
  return out;
}

}  // namespace dimcut
