#include "dimcut/commands.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <map>
#include <ostream>
#include <sstream>

#include "dimcut/io.hpp"
#include "dimcut/report.hpp"
#include "dimcut/tabular.hpp"
#include "dimcut/validate.hpp"

namespace dimcut::cli {

namespace {

namespace fs = std::filesystem;

constexpr std::string_view kReportKeys =
    "report.kv keys: problem_type, n_rows, n_features, feature_names, seed,\n"
    "  interpretability_weight, integrity_weight, target_resolution (or auto),\n"
    "  rf_importance, pca_importance, selection_/extraction_ {cut_mode, n_kept,\n"
    "  kept, resolution, cut_lambda, cut_weighted_gap, fold_scores, epochs},\n"
    "  mlp_accuracy_selection[_mean|_best], mlp_accuracy_extraction[_mean|_best],\n"
    "  interpretability_score, integrity_score, chosen_method,\n"
    "  n_selected_features, n_principal_components, n_kept, achieved_resolution,\n"
    "  reduced_columns, reduced_dataset";

struct RunFlags {
  std::string input;
  std::string synth;
  std::string problem;
  std::optional<double> interp;
  std::optional<double> integ;
  std::optional<double> resolution;
  std::uint64_t seed = 1;
  std::string out = "dimcut_out";
  std::size_t trees = 100;
  bool best_fold = false;
};

struct SynthFlags {
  std::string spec;
  std::string out;
};

struct ValidateFlags {
  std::size_t cases = 250;
  std::uint64_t seed = 1;
  std::optional<double> fixed_interp;
  std::string out = ".";
};

struct BenchFlags {
  std::vector<std::size_t> rows_sweep;
  std::vector<std::size_t> features_sweep;
  std::size_t rows = 2000;
  std::size_t features = 8;
  std::size_t repeats = 3;
  std::uint64_t seed = 1;
  std::string problem = "regression";
  std::size_t trees = 100;
  std::string out = ".";
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

ProblemType usage_problem(const std::string& text) {
  try {
    return parse_problem_type(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

int cmd_run(const RunFlags& flags, std::ostream& out) {
  if (flags.input.empty() == flags.synth.empty()) {
    throw UsageError("exactly one of --input or --synth is required");
  }

  PipelineConfig config;
  double interp = 0.5;
  double integ = 0.5;
  if (flags.interp && flags.integ) {
    interp = *flags.interp;
    integ = *flags.integ;
  } else if (flags.interp) {
    interp = *flags.interp;
    integ = 1.0 - interp;
  } else if (flags.integ) {
    integ = *flags.integ;
    interp = 1.0 - integ;
  }
  if (interp < 0.0 || interp > 1.0 || integ < 0.0 || integ > 1.0) {
    throw UsageError("--interp and --integ must lie in [0, 1]");
  }
  if (std::abs(interp + integ - 1.0) > 1e-9) {
    throw UsageError("--interp and --integ must follow the alpha / 1 - alpha pattern: "
                     "interp + integ = 1 (got " + format_double(interp) + " + " +
                     format_double(integ) + ")");
  }
  if (flags.resolution && !(*flags.resolution > 0.0 && *flags.resolution < 1.0)) {
    throw UsageError("--resolution must lie strictly between 0 and 1");
  }
  config.interpretability_weight = interp;
  config.integrity_weight = integ;
  config.target_resolution = flags.resolution;
  config.seed = flags.seed;
  config.forest.n_trees = flags.trees;
  config.use_best_fold = flags.best_fold;

  std::optional<Dataset> dataset;
  if (!flags.synth.empty()) {
    SynthSpec spec;
    try {
      spec = parse_synth_spec(flags.synth);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--synth: ") + e.what());
    }
    if (!flags.problem.empty() && usage_problem(flags.problem) != spec.problem_type) {
      throw UsageError("--problem does not match the problem type of --synth");
    }
    dataset = make_dataset(spec);
  } else {
    if (flags.problem.empty()) throw UsageError("--problem is required with --input");
    dataset = load_csv(flags.input, usage_problem(flags.problem));
  }

  out << "interpretability = " << format_double(interp) << ", integrity = "
      << format_double(integ) << ", resolution = "
      << (flags.resolution ? format_double(*flags.resolution) : std::string("auto"))
      << ", seed = " << flags.seed << "\n";

  const DecisionReport report = run_pipeline(*dataset, config);

  const fs::path dir(flags.out);
  fs::create_directories(dir);
  const std::string text = render_report(report);
  write_file_atomic(dir / "report.txt", text);
  write_file_atomic(dir / "report.kv", to_key_value(report, "reduced.csv"));
  save_csv(*report.reduced_dataset, dir / "reduced.csv");
  write_file_atomic(dir / "importance_rf.csv",
                    format_importance_csv(report.rf_importance, report.feature_names,
                                          report.selection_cut));
  write_file_atomic(dir / "importance_pca.csv",
                    format_importance_csv(report.pca_importance, report.feature_names,
                                          report.extraction_cut));
  std::string scores = "pipeline,";
  std::string selection_scores = format_cut_scores_csv(report.selection_cut);
  std::string extraction_scores = format_cut_scores_csv(report.extraction_cut);
  // Merge both series under one header with a pipeline column.
  auto body = [](const std::string& csv, std::string_view name) {
    std::string rows;
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) rows += std::string(name) + ',' + line + '\n';
    return rows;
  };
  scores += selection_scores.substr(0, selection_scores.find('\n') + 1);
  scores += body(selection_scores, "selection");
  scores += body(extraction_scores, "extraction");
  write_file_atomic(dir / "cut_scores.csv", scores);

  out << text;
  return kExitOk;
}

int cmd_synth(const SynthFlags& flags, std::ostream& out) {
  SynthSpec spec;
  try {
    spec = parse_synth_spec(flags.spec);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--spec: ") + e.what());
  }
  const Dataset data = make_dataset(spec);
  save_csv(data, flags.out);
  out << "wrote " << data.n_rows() << " x " << data.n_features() << " "
      << to_string(spec.problem_type) << " dataset to " << flags.out << "\n";
  return kExitOk;
}

int cmd_validate(const ValidateFlags& flags, std::ostream& out) {
  if (flags.cases < 1) throw UsageError("--cases must be positive");
  if (flags.fixed_interp && (*flags.fixed_interp < 0.0 || *flags.fixed_interp > 1.0)) {
    throw UsageError("--interp must lie in [0, 1]");
  }
  ValidationOptions options;
  options.n_cases = flags.cases;
  options.seed = flags.seed;
  options.fixed_interp_weight = flags.fixed_interp;
  const ValidationRun run = run_validation(options);
  const fs::path dir(flags.out);
  fs::create_directories(dir);
  write_file_atomic(dir / "validation_scatter.csv", format_scatter_csv(run));
  out << "# n_cases, n_selection, n_extraction, verdict\n"
      << format_validation_summary(run) << "\n";
  return run.verdict ? kExitOk : kExitFailure;
}

int cmd_bench(const BenchFlags& flags, std::ostream& out) {
  if (flags.rows_sweep.empty() && flags.features_sweep.empty()) {
    throw UsageError("bench needs a non-empty --rows-sweep or --features-sweep");
  }
  if (flags.repeats < 1) throw UsageError("--repeats must be positive");
  const std::size_t min_rows = PipelineConfig{}.mlp.k_folds;
  auto check_rows = [&](std::size_t rows) {
    if (rows < min_rows) {
      throw UsageError("row counts must be at least " + std::to_string(min_rows) + ", got " +
                       std::to_string(rows));
    }
  };
  auto check_features = [](std::size_t features) {
    if (features < 1) throw UsageError("feature counts must be positive");
  };
  for (auto rows : flags.rows_sweep) check_rows(rows);
  for (auto features : flags.features_sweep) check_features(features);
  check_rows(flags.rows);
  check_features(flags.features);
  BenchPlan plan;
  plan.rows_sweep = flags.rows_sweep;
  plan.features_sweep = flags.features_sweep;
  plan.fixed_rows = flags.rows;
  plan.fixed_features = flags.features;
  plan.repeats = flags.repeats;
  plan.seed = flags.seed;
  plan.problem_type = usage_problem(flags.problem);
  plan.pipeline.forest.n_trees = flags.trees;

  out << "note: absolute times depend on DIMCUT_THREADS and the machine; compare growth only\n";
  const auto records = run_bench(plan);
  const fs::path dir(flags.out);
  fs::create_directories(dir);
  write_file_atomic(dir / "bench.csv", format_bench_csv(records));

  auto summarise = [&](std::string_view sweep, const std::vector<std::size_t>& points) {
    if (points.empty()) return;
    const auto means = mean_totals(records, sweep);
    const auto ratios = growth_ratios(means);
    out << sweep << " sweep (mean total seconds):\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
      out << "  " << points[i] << " : " << format_double(means[i]);
      if (i > 0) out << "  (x" << format_double(std::round(ratios[i - 1] * 1000) / 1000) << ")";
      out << '\n';
    }
  };
  summarise("rows", plan.rows_sweep);
  summarise("features", plan.features_sweep);
  return kExitOk;
}

}  // namespace

std::string_view to_string(Phase phase) noexcept {
  switch (phase) {
    case Phase::Total: return "total";
    case Phase::Forest: return "forest";
    case Phase::Pca: return "pca";
    case Phase::MlpSelection: return "mlp_selection";
    case Phase::MlpExtraction: return "mlp_extraction";
    case Phase::Decision: return "decision";
  }
  return "unknown";
}

std::vector<BenchRecord> run_bench(const BenchPlan& plan) {
  std::vector<BenchRecord> records;
  auto sweep = [&](std::string_view name, const std::vector<std::size_t>& points, bool rows) {
    for (std::size_t point : points) {
      SynthSpec spec;
      spec.problem_type = plan.problem_type;
      spec.n_rows = rows ? point : plan.fixed_rows;
      spec.n_features = rows ? plan.fixed_features : point;
      spec.seed = plan.seed;
      const Dataset data = make_dataset(spec);
      for (std::size_t rep = 0; rep < plan.repeats; ++rep) {
        PipelineConfig config = plan.pipeline;
        config.seed = plan.seed + rep;
        PhaseTimings t;
        run_pipeline(data, config, &t);
        const std::pair<Phase, double> phases[] = {
            {Phase::Total, t.total},         {Phase::Forest, t.forest},
            {Phase::Pca, t.pca},             {Phase::MlpSelection, t.mlp_selection},
            {Phase::MlpExtraction, t.mlp_extraction}, {Phase::Decision, t.decision}};
        for (const auto& [phase, seconds] : phases) {
          records.push_back({std::string(name), spec.n_rows, spec.n_features, rep, phase, seconds,
                             config.seed});
        }
      }
    }
  };
  sweep("rows", plan.rows_sweep, true);
  sweep("features", plan.features_sweep, false);
  return records;
}

std::vector<double> mean_totals(const std::vector<BenchRecord>& records, std::string_view sweep) {
  std::vector<std::pair<std::size_t, std::size_t>> keys;
  std::map<std::pair<std::size_t, std::size_t>, std::pair<double, std::size_t>> sums;
  for (const auto& r : records) {
    if (r.sweep != sweep || r.phase != Phase::Total) continue;
    const auto key = std::make_pair(r.n_rows, r.n_features);
    auto [it, inserted] = sums.try_emplace(key, 0.0, 0);
    if (inserted) keys.push_back(key);
    it->second.first += r.wall_time;
    it->second.second += 1;
  }
  std::vector<double> means;
  for (const auto& key : keys) {
    const auto& [sum, n] = sums[key];
    means.push_back(sum / static_cast<double>(n));
  }
  return means;
}

std::vector<double> growth_ratios(const std::vector<double>& means) {
  std::vector<double> ratios;
  for (std::size_t i = 1; i < means.size(); ++i) ratios.push_back(means[i] / means[i - 1]);
  return ratios;
}

std::string format_bench_csv(const std::vector<BenchRecord>& records) {
  std::string out = "sweep,n_rows,n_features,repeat,phase,wall_time,seed\n";
  for (const auto& r : records) {
    out += r.sweep + ',' + std::to_string(r.n_rows) + ',' + std::to_string(r.n_features) + ',' +
           std::to_string(r.repeat) + ',' + std::string(to_string(r.phase)) + ',' +
           format_double(r.wall_time) + ',' + std::to_string(r.seed) + '\n';
  }
  return out;
}

int main_with_args(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"dimcut: choose between feature selection and feature extraction", "dimcut"};
  app.require_subcommand(1);
  app.footer(std::string(kReportKeys) +
             "\nExit codes: 0 success, 1 runtime failure, 2 usage error.\n"
             "DIMCUT_THREADS caps worker threads.");

  RunFlags run;
  auto* run_cmd = app.add_subcommand("run", "Run both pipelines and report the decision");
  run_cmd->add_option("--input", run.input, "CSV dataset (header row, target last)");
  run_cmd->add_option("--synth", run.synth,
                      "Synthetic spec: type,rows,features[,seed=N,informative=N,noise=X,classes=N]");
  run_cmd->add_option("--problem", run.problem, "regression | classification");
  run_cmd->add_option("--interp", run.interp, "Interpretability weight in [0,1] (default 0.5)");
  run_cmd->add_option("--integ", run.integ, "Integrity weight in [0,1] (default 0.5)");
  run_cmd->add_option("--resolution", run.resolution,
                      "Target resolution in (0,1); automatic cut when omitted");
  run_cmd->add_option("--seed", run.seed, "Pipeline seed")->capture_default_str();
  run_cmd->add_option("--out", run.out, "Output directory")->capture_default_str();
  run_cmd->add_option("--trees", run.trees, "Random forest size")->capture_default_str();
  run_cmd->add_flag("--best-fold", run.best_fold,
                    "Decide on the best fold score instead of the CV mean");

  SynthFlags synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic dataset as CSV");
  synth_cmd->add_option("--spec", synth.spec,
                        "type,rows,features[,seed=N,informative=N,noise=X,classes=N]")
      ->required();
  synth_cmd->add_option("--out", synth.out, "Output CSV path")->required();

  ValidateFlags validate;
  auto* validate_cmd = app.add_subcommand("validate", "Random-case check of the decision rule");
  validate_cmd->add_option("--cases", validate.cases, "Number of cases")->capture_default_str();
  validate_cmd->add_option("--seed", validate.seed, "Seed")->capture_default_str();
  validate_cmd->add_option("--interp", validate.fixed_interp,
                           "Pin the interpretability weight of every case");
  validate_cmd->add_option("--out", validate.out, "Output directory")->capture_default_str();

  BenchFlags bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time the pipeline over a rows or features sweep");
  bench_cmd->add_option("--rows-sweep", bench.rows_sweep, "Row counts")->delimiter(',');
  bench_cmd->add_option("--features-sweep", bench.features_sweep, "Feature counts")
      ->delimiter(',');
  bench_cmd->add_option("--rows", bench.rows, "Rows used by the features sweep")
      ->capture_default_str();
  bench_cmd->add_option("--features", bench.features, "Features used by the rows sweep")
      ->capture_default_str();
  bench_cmd->add_option("--repeats", bench.repeats, "Repeats per point")->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "Seed")->capture_default_str();
  bench_cmd->add_option("--problem", bench.problem, "regression | classification")
      ->capture_default_str();
  bench_cmd->add_option("--trees", bench.trees, "Random forest size")->capture_default_str();
  bench_cmd->add_option("--out", bench.out, "Output directory")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run, out);
    if (synth_cmd->parsed()) return cmd_synth(synth, out);
    if (validate_cmd->parsed()) return cmd_validate(validate, out);
    if (bench_cmd->parsed()) return cmd_bench(bench, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace dimcut::cli
