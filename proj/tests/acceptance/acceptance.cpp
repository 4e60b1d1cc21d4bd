// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "dimcut/commands.hpp"
#include "dimcut/decision.hpp"
#include "dimcut/io.hpp"
#include "dimcut/mlp.hpp"
#include "dimcut/pca.hpp"
#include "dimcut/resolution.hpp"
#include "dimcut/rng.hpp"
#include "dimcut/validate.hpp"

using namespace dimcut;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void note(const std::string& what) {
    if (pass) detail += (detail.empty() ? "" : "; ") + what;
  }
};

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

// 1 -----------------------------------------------------------------------
Outcome resolution_example() {
  Outcome o;
  const ImportanceVector imp({0.35, 0.30, 0.15, 0.10, 0.10}, ImportanceSource::Forest);
  const CutDecision cut = select_by_target(imp, 0.80);
  o.require(cut.n_kept == 3, "n_kept = " + std::to_string(cut.n_kept));
  o.require(round3(cut.achieved_resolution) == 0.8, "resolution " + fmt(cut.achieved_resolution));
  o.note("n_kept 3, resolution " + fmt(cut.achieved_resolution, 2));
  return o;
}

// 2 -----------------------------------------------------------------------
Outcome decision_algebra() {
  Outcome o;
  struct Row {
    double s_fs, s_fe, w_i, w_g, interp, integ;
    Method method;
  };
  const Row rows[] = {
      {0.961, 0.941, 0.5, 0.5, 0.481, 0.471, Method::Selection},
      {0.936, 0.934, 0.4, 0.6, 0.374, 0.560, Method::Extraction},
      {0.875, 0.988, 0.8, 0.2, 0.700, 0.198, Method::Selection},
      {0.980, 0.993, 0.4, 0.6, 0.392, 0.600, Method::Extraction},
  };
  for (const auto& r : rows) {
    const Decision d = decide(r.s_fs, r.s_fe, r.w_i, r.w_g);
    const std::string tag = "(" + fmt(r.s_fs, 3) + ", " + fmt(r.s_fe, 3) + ")";
    o.require(std::abs(round3(d.interpretability_score) - r.interp) <= 0.005 + 1e-12,
              tag + " interpretability " + fmt(d.interpretability_score));
    o.require(std::abs(round3(d.integrity_score) - r.integ) <= 0.005 + 1e-12,
              tag + " integrity " + fmt(d.integrity_score));
    o.require(d.method == r.method, tag + " method " + std::string(to_string(d.method)));
  }
  o.note("4 reference cases reproduced");
  return o;
}

// 3 -----------------------------------------------------------------------
std::size_t oracle_cut(std::vector<double> v) {
  std::stable_sort(v.begin(), v.end(), std::greater<>());
  std::vector<double> kept;
  double before = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i == 0 || !(before >= 0.70 - 1e-9 && v[i] < 0.03)) kept.push_back(v[i] * 10.0);
    before += v[i];
  }
  std::size_t best = 1;
  double best_score = -1.0;
  for (std::size_t f = 1; f < kept.size(); ++f) {
    const double lambda = std::accumulate(kept.begin(), kept.begin() + f, 0.0);
    const double gap = kept[f - 1] - kept[f];
    if (lambda + gap * gap > best_score) {
      best_score = lambda + gap * gap;
      best = f;
    }
  }
  return best;
}

Outcome auto_cut_oracle() {
  Outcome o;
  Rng rng(123);
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(49);
    std::vector<double> raw(n);
    for (auto& v : raw) v = trial % 3 == 0 ? std::round(rng.uniform() * 5.0) : std::pow(rng.uniform(), 3.0);
    if (std::all_of(raw.begin(), raw.end(), [](double v) { return v == 0.0; })) raw[0] = 1.0;
    const ImportanceVector imp = ImportanceVector::normalize(raw, ImportanceSource::Forest);
    if (auto_cut(imp).n_kept != oracle_cut(imp.scores())) ++mismatches;
  }
  o.require(mismatches == 0, std::to_string(mismatches) + " of 1000 argmax mismatches");
  o.note("1000/1000 argmax matches");
  return o;
}

// 4 -----------------------------------------------------------------------
Outcome gradient_checks() {
  Outcome o;
  Rng rng(9);
  Matrix x(20, 4);
  std::vector<double> y_reg(20), y_cls(20);
  for (std::size_t r = 0; r < 20; ++r) {
    for (std::size_t j = 0; j < 4; ++j) x(r, j) = rng.normal();
    y_reg[r] = x(r, 0) - 2.0 * x(r, 1) + 0.1 * rng.normal();
    y_cls[r] = static_cast<double>(r % 3);
  }
  const std::vector<std::string> names{"a", "b", "c", "d"};
  const Dataset reg(names, x, y_reg, ProblemType::Regression);
  const Dataset cls(names, x, y_cls, ProblemType::Classification);
  double worst = 0.0;
  for (auto activation : {Activation::ReLU, Activation::Tanh}) {
    MlpConfig c;
    c.activation = activation;
    for (const Dataset* probe : {&reg, &cls}) {
      const double err = gradient_check(c, *probe);
      worst = std::max(worst, err);
      o.require(err <= 1e-5, std::string(to_string(activation)) + " " +
                                 std::string(to_string(probe->problem_type())) + " error " +
                                 std::to_string(err));
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "max relative error %.2e", worst);
  o.note(buf);
  return o;
}

// 5 -----------------------------------------------------------------------
Dataset regression_set(std::size_t features, std::size_t informative, double noise) {
  SynthSpec spec;
  spec.n_rows = 500;
  spec.n_features = features;
  spec.n_informative = informative;
  spec.noise_scale = noise;
  return make_regression(spec);
}

Dataset classification_set(std::size_t features, std::size_t informative) {
  SynthSpec spec;
  spec.problem_type = ProblemType::Classification;
  spec.n_rows = 500;
  spec.n_features = features;
  spec.n_informative = informative;
  return make_classification(spec);
}

Outcome table3_analogue() {
  Outcome o;
  const double reg = evaluate(regression_set(5, 0, 1.0), MlpConfig{}).mean_score;
  const double cls = evaluate(classification_set(5, 0), MlpConfig{}).mean_score;
  o.require(reg >= 0.95, "regression R^2 " + fmt(reg));
  o.require(cls >= 0.85, "classification accuracy " + fmt(cls));
  o.note("regression R^2 " + fmt(reg) + ", classification accuracy " + fmt(cls));
  return o;
}

// 6 -----------------------------------------------------------------------
Outcome scenarios() {
  Outcome o;
  struct Scenario {
    const char* name;
    Dataset data;
    double w_interp;
    std::optional<double> target;
  };
  std::vector<Scenario> cases;
  cases.push_back({"reg 500x5 target 0.90", regression_set(5, 0, 10.0), 0.5, 0.90});
  cases.push_back({"cls 500x5 target 0.75", classification_set(5, 0), 0.4, 0.75});
  cases.push_back({"reg 500x25 auto", regression_set(25, 10, 10.0), 0.8, std::nullopt});
  cases.push_back({"cls 500x25 auto", classification_set(25, 2), 0.5, std::nullopt});

  for (const auto& s : cases) {
    PipelineConfig config;
    config.interpretability_weight = s.w_interp;
    config.integrity_weight = 1.0 - s.w_interp;
    config.target_resolution = s.target;
    const DecisionReport r = run_pipeline(s.data, config);
    const double baseline = evaluate(s.data, MlpConfig{}).mean_score;
    const double chosen = r.chosen_method == Method::Selection ? r.selection_cv.mean_score
                                                               : r.extraction_cv.mean_score;
    const std::string tag = s.name;
    o.require(r.n_kept >= 1 && r.n_kept <= s.data.n_features(),
              tag + " n_kept " + std::to_string(r.n_kept));
    if (s.target) {
      o.require(r.achieved_resolution >= *s.target - 1e-9,
                tag + " resolution " + fmt(r.achieved_resolution));
    }
    o.require(r.reduced_dataset && r.reduced_dataset->n_features() == r.n_kept,
              tag + " reduced dataset width");
    o.require(chosen >= baseline - 0.15,
              tag + " chosen " + fmt(chosen) + " vs baseline " + fmt(baseline));
    o.note(tag + ": " + std::string(to_string(r.chosen_method)) + " n_kept " +
           std::to_string(r.n_kept) + " score " + fmt(chosen, 3) + " baseline " +
           fmt(baseline, 3));
  }
  return o;
}

// 7 -----------------------------------------------------------------------
Outcome validation() {
  Outcome o;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const ValidationRun run = run_validation({250, seed, std::nullopt});
    const std::string tag = "seed " + std::to_string(seed);
    o.require(run.verdict, tag + " verdict false");
    const std::string csv = format_scatter_csv(run);
    const auto lines = std::count(csv.begin(), csv.end(), '\n') - 1;
    o.require(lines == 250, tag + " scatter rows " + std::to_string(lines));
    for (const auto& c : run.cases) {
      if (c.interpret_s + c.integ_s > 0.99) {
        o.require(false, tag + " score sum " + fmt(c.interpret_s + c.integ_s));
        break;
      }
    }
  }
  o.note("10 seeds x 250 cases consistent");
  return o;
}

// 8 -----------------------------------------------------------------------
Outcome scalability() {
  Outcome o;
  cli::BenchPlan plan;
  plan.rows_sweep = {1000, 2000, 4000, 8000};
  plan.features_sweep = {5, 10, 20, 40};
  plan.fixed_features = 8;
  plan.fixed_rows = 2000;
  plan.repeats = 3;
  const auto records = cli::run_bench(plan);
  for (const char* sweep : {"rows", "features"}) {
    const auto ratios = cli::growth_ratios(cli::mean_totals(records, sweep));
    std::string list;
    for (double r : ratios) {
      list += (list.empty() ? "" : "/") + fmt(r, 2);
      o.require(r <= 4.0, std::string(sweep) + " ratio " + fmt(r, 2));
    }
    o.note(std::string(sweep) + " ratios " + list);
  }
  return o;
}

// 9 -----------------------------------------------------------------------
Outcome determinism() {
  Outcome o;
  const fs::path base = fs::temp_directory_path() / "dimcut_acceptance_determinism";
  fs::remove_all(base);
  std::string files[2][2];
  for (int i = 0; i < 2; ++i) {
    const fs::path dir = base / std::to_string(i);
    std::ostringstream out, err;
    const int code = cli::main_with_args(
        {"dimcut", "run", "--synth", "regression,500,5", "--seed", "7", "--out", dir.string()}, out,
        err);
    o.require(code == 0, "run " + std::to_string(i) + " exit " + std::to_string(code));
    if (code != 0) return o;
    files[i][0] = read_file(dir / "report.kv");
    files[i][1] = read_file(dir / "reduced.csv");
  }
  o.require(files[0][0] == files[1][0], "report.kv differs");
  o.require(files[0][1] == files[1][1], "reduced.csv differs");
  o.note("report.kv and reduced.csv byte-identical");
  fs::remove_all(base);
  return o;
}

// 10 ----------------------------------------------------------------------
Outcome pca_properties() {
  Outcome o;
  for (const Dataset& d : {regression_set(25, 10, 10.0), classification_set(25, 2)}) {
    const PcaModel m = fit_pca(d);
    const auto& ratio = m.explained_variance_ratio;
    for (std::size_t i = 0; i + 1 < ratio.size(); ++i) {
      if (ratio[i] < ratio[i + 1]) o.require(false, "ratios increase at " + std::to_string(i));
    }
    const double sum = std::accumulate(ratio.begin(), ratio.end(), 0.0);
    o.require(std::abs(sum - 1.0) <= 1e-9, "ratio sum " + fmt(sum, 12));

    const Dataset p = project(m, d, d.n_features());
    double worst = 0.0;
    for (std::size_t r = 0; r < d.n_rows(); ++r) {
      for (std::size_t a = 0; a < d.n_features(); ++a) {
        double back = 0.0;
        for (std::size_t k = 0; k < d.n_features(); ++k) {
          back += p.features()(r, k) * m.components(a, k);
        }
        worst = std::max(worst, std::abs(back - (d.features()(r, a) - m.mean[a])));
      }
    }
    o.require(worst <= 1e-8, "reconstruction error " + std::to_string(worst));
  }

  Rng rng(5);
  Matrix x(300, 3);
  for (std::size_t r = 0; r < 300; ++r) {
    const double t = rng.normal();
    x(r, 0) = t;
    x(r, 1) = -3.0 * t;
    x(r, 2) = 0.5 * t;
  }
  const Dataset rank1({"a", "b", "c"}, x, std::vector<double>(300, 0.0), ProblemType::Regression);
  const auto ratio = fit_pca(rank1).explained_variance_ratio;
  o.require(std::abs(ratio[0] - 1.0) <= 1e-9 && std::abs(ratio[1]) <= 1e-9 &&
                std::abs(ratio[2]) <= 1e-9,
            "rank-1 ratios " + fmt(ratio[0], 12) + "," + fmt(ratio[1], 12));
  o.note("ordering, normalization, rank-1 and reconstruction hold");
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria = {
      {1, "resolution worked example", resolution_example},
      {2, "decision algebra on reference cases", decision_algebra},
      {3, "auto-cut oracle equivalence", auto_cut_oracle},
      {4, "MLP gradient check", gradient_checks},
      {5, "desk-scale full-feature MLP scores", table3_analogue},
      {6, "end-to-end scenarios", scenarios},
      {7, "validation experiment", validation},
      {8, "scalability trend", scalability},
      {9, "determinism", determinism},
      {10, "PCA properties", pca_properties},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.check();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2d: %s  %s [%.1fs] %s\n", c.id, outcome.pass ? "PASS" : "FAIL",
                c.title, seconds, outcome.detail.c_str());
    std::fflush(stdout);
    failures += outcome.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
