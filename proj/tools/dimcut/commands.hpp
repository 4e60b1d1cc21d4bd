#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "dimcut/decision.hpp"

namespace dimcut::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

enum class Phase { Total, Forest, Pca, MlpSelection, MlpExtraction, Decision };

std::string_view to_string(Phase phase) noexcept;

/// One timed pipeline phase at one sweep point.
struct BenchRecord {
  std::string sweep;  // "rows" or "features"
  std::size_t n_rows = 0;
  std::size_t n_features = 0;
  std::size_t repeat = 0;
  Phase phase = Phase::Total;
  double wall_time = 0.0;
  std::uint64_t seed = 0;
};

struct BenchPlan {
  std::vector<std::size_t> rows_sweep;
  std::vector<std::size_t> features_sweep;
  /// Feature count used by the rows sweep.
  std::size_t fixed_features = 8;
  /// Row count used by the features sweep.
  std::size_t fixed_rows = 2000;
  std::size_t repeats = 3;
  std::uint64_t seed = 1;
  ProblemType problem_type = ProblemType::Regression;
  PipelineConfig pipeline{};
};

/// Generates data for each sweep point and times run_pipeline phases.
std::vector<BenchRecord> run_bench(const BenchPlan& plan);

/// Mean Total time per sweep point, in sweep order.
std::vector<double> mean_totals(const std::vector<BenchRecord>& records, std::string_view sweep);

/// Ratio of consecutive mean Total times.
std::vector<double> growth_ratios(const std::vector<double>& means);

std::string format_bench_csv(const std::vector<BenchRecord>& records);

/// Parses argv-style arguments (args[0] is the program name) and runs the
/// selected subcommand: run, synth, validate or bench.
int main_with_args(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dimcut::cli
