#include "dimcut/report.hpp"

#include <charconv>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include "dimcut/io.hpp"

namespace dimcut {

namespace {

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string percent1(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * v);
  return buf;
}

template <typename T, typename F>
std::string join(const std::vector<T>& items, F&& format) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += format(items[i]);
  }
  return out;
}

std::string join_doubles(const std::vector<double>& v) {
  return join(v, [](double x) { return format_double(x); });
}

std::string join_sizes(const std::vector<std::size_t>& v) {
  return join(v, [](std::size_t x) { return std::to_string(x); });
}

std::string_view mode_name(CutDecision::Mode mode) {
  return mode == CutDecision::Mode::Auto ? "auto" : "target";
}

void write_cut(std::ostringstream& out, std::string_view prefix, const CutDecision& cut) {
  out << prefix << "_cut_mode = " << mode_name(cut.mode) << '\n';
  out << prefix << "_n_kept = " << cut.n_kept << '\n';
  out << prefix << "_kept = " << join_sizes(cut.kept) << '\n';
  out << prefix << "_resolution = " << format_double(cut.achieved_resolution) << '\n';
  std::vector<double> lambda;
  std::vector<double> gap;
  for (const auto& s : cut.scores) {
    lambda.push_back(s.resolution);
    gap.push_back(s.weighted_gap);
  }
  out << prefix << "_cut_lambda = " << join_doubles(lambda) << '\n';
  out << prefix << "_cut_weighted_gap = " << join_doubles(gap) << '\n';
}

void write_cv(std::ostringstream& out, std::string_view prefix, const CvResult& cv) {
  out << prefix << "_fold_scores = " << join_doubles(cv.fold_scores) << '\n';
  out << prefix << "_epochs = " << join_sizes(cv.epochs_run) << '\n';
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

class KeyValues {
 public:
  explicit KeyValues(std::string_view text) {
    std::size_t start = 0;
    std::size_t line_no = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      const std::string_view line = trim(text.substr(start, end - start));
      ++line_no;
      start = end + 1;
      if (line.empty() || line.front() == '#') continue;
      const std::size_t eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw std::invalid_argument("line " + std::to_string(line_no) + ": expected 'key = value'");
      }
      values_[std::string(trim(line.substr(0, eq)))] = std::string(trim(line.substr(eq + 1)));
    }
  }

  const std::string& text(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw std::invalid_argument("missing key '" + key + "'");
    return it->second;
  }

  double real(const std::string& key) const { return parse_real(text(key), key); }

  std::size_t count(const std::string& key) const { return parse_count(text(key), key); }

  std::vector<std::string> list(const std::string& key) const {
    std::vector<std::string> out;
    const std::string& value = text(key);
    if (value.empty()) return out;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = value.find(',', start);
      out.emplace_back(trim(std::string_view(value).substr(
          start, comma == std::string::npos ? std::string::npos : comma - start)));
      if (comma == std::string::npos) return out;
      start = comma + 1;
    }
  }

  std::vector<double> reals(const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : list(key)) out.push_back(parse_real(item, key));
    return out;
  }

  std::vector<std::size_t> counts(const std::string& key) const {
    std::vector<std::size_t> out;
    for (const auto& item : list(key)) out.push_back(parse_count(item, key));
    return out;
  }

 private:
  static double parse_real(std::string_view s, const std::string& key) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
      throw std::invalid_argument("key '" + key + "': bad number '" + std::string(s) + "'");
    }
    return v;
  }

  static std::size_t parse_count(std::string_view s, const std::string& key) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
      throw std::invalid_argument("key '" + key + "': bad integer '" + std::string(s) + "'");
    }
    return v;
  }

  std::map<std::string, std::string> values_;
};

CutDecision read_cut(const KeyValues& kv, const std::string& prefix,
                     std::optional<double> target) {
  CutDecision cut;
  const std::string& mode = kv.text(prefix + "_cut_mode");
  if (mode == "auto") {
    cut.mode = CutDecision::Mode::Auto;
  } else if (mode == "target") {
    cut.mode = CutDecision::Mode::UserTarget;
    cut.target = target;
  } else {
    throw std::invalid_argument("unknown cut mode '" + mode + "'");
  }
  cut.n_kept = kv.count(prefix + "_n_kept");
  cut.kept = kv.counts(prefix + "_kept");
  cut.achieved_resolution = kv.real(prefix + "_resolution");
  const auto lambda = kv.reals(prefix + "_cut_lambda");
  const auto gap = kv.reals(prefix + "_cut_weighted_gap");
  if (lambda.size() != gap.size()) throw std::invalid_argument("cut score lists differ in length");
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    cut.scores.push_back({i + 1, lambda[i], gap[i], lambda[i] + gap[i]});
  }
  return cut;
}

CvResult read_cv(const KeyValues& kv, const std::string& prefix, ScoreKind kind) {
  CvResult cv;
  cv.score_kind = kind;
  cv.fold_scores = kv.reals(prefix + "_fold_scores");
  cv.epochs_run = kv.counts(prefix + "_epochs");
  cv.mean_score = kv.real("mlp_accuracy_" + prefix + "_mean");
  cv.best_score = kv.real("mlp_accuracy_" + prefix + "_best");
  return cv;
}

}  // namespace

std::string render_report(const DecisionReport& report) {
  std::ostringstream out;
  const auto& names = report.feature_names;
  out << "Dimensionality reduction decision\n";
  out << "  problem type        : " << to_string(report.problem_type) << '\n';
  out << "  rows x features     : " << report.n_rows << " x " << report.n_features() << '\n';
  out << "  interpretability    : " << fixed3(report.interpretability_weight) << '\n';
  out << "  integrity           : " << fixed3(report.integrity_weight) << '\n';
  out << "  target resolution   : "
      << (report.target_resolution ? percent1(*report.target_resolution)
                                   : std::string("auto"))
      << "\n\n";

  out << "1. Normalized importance after random forest\n";
  for (std::size_t j : report.rf_importance.order()) {
    out << "     " << names[j] << " : " << fixed3(report.rf_importance.scores()[j]) << '\n';
  }
  out << "2. Normalized importance after PCA\n";
  for (std::size_t k : report.pca_importance.order()) {
    out << "     PC" << (k + 1) << " : " << fixed3(report.pca_importance.scores()[k]) << '\n';
  }
  out << "3. MLP accuracy (selection)  : " << fixed3(report.mlp_accuracy_selection)
      << "  (CV mean " << fixed3(report.selection_cv.mean_score) << ", best fold "
      << fixed3(report.selection_cv.best_score) << ")\n";
  out << "4. MLP accuracy (extraction) : " << fixed3(report.mlp_accuracy_extraction)
      << "  (CV mean " << fixed3(report.extraction_cv.mean_score) << ", best fold "
      << fixed3(report.extraction_cv.best_score) << ")\n";
  out << "5. Interpretability score    : " << fixed3(report.interpretability_score) << '\n';
  out << "6. Integrity score           : " << fixed3(report.integrity_score) << '\n';
  out << "7. Chosen method             : " << to_string(report.chosen_method) << '\n';
  out << "8. Selected features         : ";
  if (report.chosen_method == Method::Selection) {
    out << report.n_kept << " (";
    const auto kept = report.reduced_names();
    for (std::size_t i = 0; i < kept.size(); ++i) out << (i ? ", " : "") << kept[i];
    out << ")\n";
  } else {
    out << "n/a (selection would keep " << report.selection_cut.n_kept << ")\n";
  }
  out << "9. Principal components      : ";
  if (report.chosen_method == Method::Extraction) {
    out << report.n_kept << " (";
    const auto kept = report.reduced_names();
    for (std::size_t i = 0; i < kept.size(); ++i) out << (i ? ", " : "") << kept[i];
    out << ")\n";
  } else {
    out << "n/a (extraction would keep " << report.extraction_cut.n_kept << ")\n";
  }
  out << "10. Resolution reached       : " << percent1(report.achieved_resolution);
  if (report.target_resolution) out << " (target " << percent1(*report.target_resolution) << ")";
  out << '\n';
  return out.str();
}

std::string to_key_value(const DecisionReport& report, std::string_view reduced_dataset_file) {
  std::ostringstream out;
  out << "problem_type = " << to_string(report.problem_type) << '\n';
  out << "n_rows = " << report.n_rows << '\n';
  out << "n_features = " << report.n_features() << '\n';
  out << "feature_names = " << join(report.feature_names, [](const std::string& s) { return s; })
      << '\n';
  out << "seed = " << report.seed << '\n';
  out << "interpretability_weight = " << format_double(report.interpretability_weight) << '\n';
  out << "integrity_weight = " << format_double(report.integrity_weight) << '\n';
  out << "target_resolution = "
      << (report.target_resolution ? format_double(*report.target_resolution)
                                   : std::string("auto"))
      << '\n';
  out << "rf_importance = " << join_doubles(report.rf_importance.scores()) << '\n';
  out << "pca_importance = " << join_doubles(report.pca_importance.scores()) << '\n';
  write_cut(out, "selection", report.selection_cut);
  write_cut(out, "extraction", report.extraction_cut);
  write_cv(out, "selection", report.selection_cv);
  write_cv(out, "extraction", report.extraction_cv);
  out << "mlp_accuracy_selection = " << format_double(report.mlp_accuracy_selection) << '\n';
  out << "mlp_accuracy_selection_mean = " << format_double(report.selection_cv.mean_score) << '\n';
  out << "mlp_accuracy_selection_best = " << format_double(report.selection_cv.best_score) << '\n';
  out << "mlp_accuracy_extraction = " << format_double(report.mlp_accuracy_extraction) << '\n';
  out << "mlp_accuracy_extraction_mean = " << format_double(report.extraction_cv.mean_score)
      << '\n';
  out << "mlp_accuracy_extraction_best = " << format_double(report.extraction_cv.best_score)
      << '\n';
  out << "interpretability_score = " << format_double(report.interpretability_score) << '\n';
  out << "integrity_score = " << format_double(report.integrity_score) << '\n';
  out << "chosen_method = " << to_string(report.chosen_method) << '\n';
  out << "n_selected_features = "
      << (report.chosen_method == Method::Selection ? std::to_string(report.n_kept) : "none")
      << '\n';
  out << "n_principal_components = "
      << (report.chosen_method == Method::Extraction ? std::to_string(report.n_kept) : "none")
      << '\n';
  out << "n_kept = " << report.n_kept << '\n';
  out << "achieved_resolution = " << format_double(report.achieved_resolution) << '\n';
  out << "reduced_columns = "
      << join(report.reduced_names(), [](const std::string& s) { return s; }) << '\n';
  out << "reduced_dataset = " << reduced_dataset_file << '\n';
  return out.str();
}

DecisionReport parse_key_value(std::string_view text) {
  const KeyValues kv(text);
  DecisionReport r;
  r.problem_type = parse_problem_type(kv.text("problem_type"));
  r.n_rows = kv.count("n_rows");
  r.feature_names = kv.list("feature_names");
  if (r.feature_names.size() != kv.count("n_features")) {
    throw std::invalid_argument("feature_names length does not match n_features");
  }
  const std::string& seed = kv.text("seed");
  auto [ptr, ec] = std::from_chars(seed.data(), seed.data() + seed.size(), r.seed);
  if (ec != std::errc{} || ptr != seed.data() + seed.size()) {
    throw std::invalid_argument("bad seed '" + seed + "'");
  }
  r.interpretability_weight = kv.real("interpretability_weight");
  r.integrity_weight = kv.real("integrity_weight");
  if (kv.text("target_resolution") != "auto") r.target_resolution = kv.real("target_resolution");
  r.rf_importance = ImportanceVector(kv.reals("rf_importance"), ImportanceSource::Forest);
  r.pca_importance = ImportanceVector(kv.reals("pca_importance"), ImportanceSource::Pca);
  r.selection_cut = read_cut(kv, "selection", r.target_resolution);
  r.extraction_cut = read_cut(kv, "extraction", r.target_resolution);
  const ScoreKind kind =
      r.problem_type == ProblemType::Regression ? ScoreKind::R2 : ScoreKind::Accuracy;
  r.selection_cv = read_cv(kv, "selection", kind);
  r.extraction_cv = read_cv(kv, "extraction", kind);
  r.mlp_accuracy_selection = kv.real("mlp_accuracy_selection");
  r.mlp_accuracy_extraction = kv.real("mlp_accuracy_extraction");
  r.interpretability_score = kv.real("interpretability_score");
  r.integrity_score = kv.real("integrity_score");
  r.chosen_method = parse_method(kv.text("chosen_method"));
  r.n_kept = kv.count("n_kept");
  r.achieved_resolution = kv.real("achieved_resolution");
  return r;
}

std::string format_importance_csv(const ImportanceVector& importance,
                                  const std::vector<std::string>& names, const CutDecision& cut) {
  std::string out = "rank,feature,index,importance,cumulative,kept\n";
  double cumulative = 0.0;
  const auto& order = importance.order();
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::size_t j = order[i];
    cumulative += importance.scores()[j];
    const std::string name =
        importance.source() == ImportanceSource::Pca ? "PC" + std::to_string(j + 1) : names.at(j);
    out += std::to_string(i + 1) + ',' + name + ',' + std::to_string(j) + ',' +
           format_double(importance.scores()[j]) + ',' + format_double(cumulative) + ',' +
           (i < cut.n_kept ? "1" : "0") + '\n';
  }
  return out;
}

}  // namespace dimcut
