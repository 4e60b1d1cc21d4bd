#include <doctest.h>

#include <cmath>
#include <string>

#include "dimcut/decision.hpp"
#include "dimcut/report.hpp"

using namespace dimcut;

namespace {

double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

PipelineConfig small_config() {
  PipelineConfig c;
  c.forest.n_trees = 30;
  return c;
}

Dataset small_regression(std::uint64_t seed = 1) {
  SynthSpec spec;
  spec.n_rows = 200;
  spec.n_features = 4;
  spec.seed = seed;
  return make_regression(spec);
}

Dataset small_classification() {
  SynthSpec spec;
  spec.problem_type = ProblemType::Classification;
  spec.n_rows = 200;
  spec.n_features = 5;
  spec.n_informative = 2;
  return make_classification(spec);
}

}  // namespace

TEST_CASE("reference score arithmetic") {
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
    CHECK(d.interpretability_score == r.w_i * r.s_fs);
    CHECK(d.integrity_score == r.w_g * r.s_fe);
    CHECK(std::abs(round3(d.interpretability_score) - r.interp) <= 0.005);
    CHECK(std::abs(round3(d.integrity_score) - r.integ) <= 0.005);
    CHECK(d.method == r.method);
  }
  CHECK(decide(0.961, 0.941, 0.5, 0.5).interpretability_score == doctest::Approx(0.4805));
  CHECK(decide(0.980, 0.993, 0.4, 0.6).integrity_score == doctest::Approx(0.5958));
}

TEST_CASE("equal accuracies at equal weights choose selection") {
  for (int i = 0; i <= 100; ++i) {
    const double x = i / 100.0;
    CHECK(decide(x, x, 0.5, 0.5).method == Method::Selection);
  }
}

TEST_CASE("raising the interpretability weight never flips to extraction") {
  for (int a = 0; a <= 20; ++a) {
    for (int b = 0; b <= 20; ++b) {
      const double s_fs = a / 20.0, s_fe = b / 20.0;
      bool seen_selection = false;
      for (int k = 0; k <= 100; ++k) {
        const double w = k / 100.0;
        const bool selection = decide(s_fs, s_fe, w, 1.0 - w).method == Method::Selection;
        if (seen_selection) CHECK(selection);
        seen_selection = seen_selection || selection;
      }
    }
  }
}

TEST_CASE("scores are exact products on a grid") {
  for (int a = 0; a <= 10; ++a) {
    for (int k = 0; k <= 10; ++k) {
      const double s = a / 10.0, w = k / 10.0;
      const Decision d = decide(s, 0.5, w, 1.0 - w);
      CHECK(d.interpretability_score == w * s);
      CHECK(d.integrity_score == (1.0 - w) * 0.5);
    }
  }
}

TEST_CASE("weight validation") {
  CHECK_THROWS(decide(0.9, 0.9, 0.7, 0.7));
  CHECK_THROWS(decide(0.9, 0.9, -0.1, 1.1));
  PipelineConfig c;
  c.interpretability_weight = 0.7;
  c.integrity_weight = 0.7;
  try {
    c.validate();
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("alpha / 1 - alpha") != std::string::npos);
  }
  c = PipelineConfig{};
  c.target_resolution = 1.0;
  CHECK_THROWS(c.validate());
  CHECK(parse_method("EXTRACTION") == Method::Extraction);
  CHECK_THROWS(parse_method("BOTH"));
}

TEST_CASE("run_pipeline invariants and determinism") {
  const Dataset d = small_regression();
  PipelineConfig c = small_config();
  c.target_resolution = 0.9;
  const DecisionReport a = run_pipeline(d, c);
  const DecisionReport b = run_pipeline(d, c);
  CHECK(a == b);

  CHECK(a.interpretability_score == doctest::Approx(0.5 * a.mlp_accuracy_selection).epsilon(1e-12));
  CHECK(a.integrity_score == doctest::Approx(0.5 * a.mlp_accuracy_extraction).epsilon(1e-12));
  CHECK((a.chosen_method == Method::Selection) == (a.interpretability_score >= a.integrity_score));
  CHECK(a.n_kept >= 1);
  CHECK(a.n_kept <= 4);
  CHECK(a.achieved_resolution >= 0.9 - 1e-9);
  REQUIRE(a.reduced_dataset.has_value());
  CHECK(a.reduced_dataset->n_features() == a.n_kept);
  CHECK(a.reduced_dataset->feature_names() == a.reduced_names());
  CHECK(a.mlp_accuracy_selection == a.selection_cv.mean_score);

  // Each pipeline cuts its own importance vector with the same rule.
  CHECK(a.selection_cut == select_by_target(a.rf_importance, 0.9));
  CHECK(a.extraction_cut == select_by_target(a.pca_importance, 0.9));
  CHECK(a.rf_importance.source() == ImportanceSource::Forest);
  CHECK(a.pca_importance.source() == ImportanceSource::Pca);

  c.seed = 2;
  CHECK_FALSE(run_pipeline(d, c).rf_importance == a.rf_importance);
}

TEST_CASE("automatic mode applies to both pipelines") {
  const Dataset d = small_classification();
  const DecisionReport r = run_pipeline(d, small_config());
  CHECK(r.selection_cut.mode == CutDecision::Mode::Auto);
  CHECK(r.extraction_cut.mode == CutDecision::Mode::Auto);
  CHECK(r.selection_cut == auto_cut(r.rf_importance));
  CHECK(r.extraction_cut == auto_cut(r.pca_importance));
  CHECK(r.selection_cv.score_kind == ScoreKind::Accuracy);
}

TEST_CASE("best-fold option feeds the best fold into the decision") {
  PipelineConfig c = small_config();
  c.use_best_fold = true;
  const DecisionReport r = run_pipeline(small_regression(3), c);
  CHECK(r.mlp_accuracy_selection == r.selection_cv.best_score);
  CHECK(r.mlp_accuracy_extraction == r.extraction_cv.best_score);
}

TEST_CASE("report rendering and serialization") {
  PipelineConfig c = small_config();
  c.target_resolution = 0.9;
  c.interpretability_weight = 1.0;
  c.integrity_weight = 0.0;
  const DecisionReport sel = run_pipeline(small_regression(), c);
  REQUIRE(sel.chosen_method == Method::Selection);
  const std::string text = render_report(sel);
  CHECK(text.find("SELECTION") != std::string::npos);
  CHECK(text.find("5. Interpretability score") != std::string::npos);
  CHECK(text.find("6. Integrity score") != std::string::npos);
  for (int item = 1; item <= 10; ++item) {
    CHECK(text.find(std::to_string(item) + ". ") != std::string::npos);
  }

  c.interpretability_weight = 0.0;
  c.integrity_weight = 1.0;
  const DecisionReport ext = run_pipeline(small_regression(), c);
  REQUIRE(ext.chosen_method == Method::Extraction);
  CHECK(ext.reduced_dataset->feature_names().front() == "PC1");
  CHECK(render_report(ext).find("EXTRACTION") != std::string::npos);
  CHECK(render_report(ext).find("(PC1") != std::string::npos);

  for (const DecisionReport* r : {&sel, &ext}) {
    DecisionReport expected = *r;
    expected.reduced_dataset.reset();
    const std::string kv = to_key_value(*r);
    CHECK(parse_key_value(kv) == expected);
    CHECK(kv.find("reduced_dataset = reduced.csv") != std::string::npos);
  }

  DecisionReport automatic = run_pipeline(small_classification(), small_config());
  automatic.reduced_dataset.reset();
  CHECK(parse_key_value(to_key_value(automatic)) == automatic);
  CHECK_THROWS(parse_key_value("problem_type = regression\n"));
}

TEST_CASE("importance CSV") {
  const ImportanceVector imp({0.2, 0.5, 0.3}, ImportanceSource::Forest);
  const std::string csv =
      format_importance_csv(imp, {"a", "b", "c"}, select_by_target(imp, 0.7));
  CHECK(csv ==
        "rank,feature,index,importance,cumulative,kept\n"
        "1,b,1,0.5,0.5,1\n"
        "2,c,2,0.3,0.8,1\n"
        "3,a,0,0.2,1,0\n");
}
