#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dimcut/decision.hpp"

namespace dimcut {

/// One synthetic (accuracy, weight) draw and its classification.
struct ValidationCase {
  double acc_fs = 0.0;
  double acc_fe = 0.0;
  double w_interp = 0.0;
  double w_integ = 0.0;
  double interpret_s = 0.0;
  double integ_s = 0.0;
  Method label = Method::Selection;
};

struct ValidationOptions {
  std::size_t n_cases = 250;
  std::uint64_t seed = 1;
  /// Pin every case's interpretability weight instead of drawing it.
  std::optional<double> fixed_interp_weight;
};

struct ValidationRun {
  std::vector<ValidationCase> cases;
  std::size_t n_selection = 0;
  std::size_t n_extraction = 0;
  /// True when every label agrees with a direct re-evaluation of the
  /// threshold comparison.
  bool verdict = false;
};

/// acc_fs ~ U[0.6, 0.99]; acc_fe = clamp(acc_fs + U[-0.2, 0.2], 0.6, 0.99);
/// w_interp ~ U[0, 1]; labels from decide().
ValidationRun run_validation(const ValidationOptions& options = {});

/// "interpret_s,integ_s,label" rows.
std::string format_scatter_csv(const ValidationRun& run);

/// "n_cases, n_selection, n_extraction, verdict" values on one line.
std::string format_validation_summary(const ValidationRun& run);

}  // namespace dimcut
