#include "dimcut/tabular.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>
#include <unordered_set>

#include "dimcut/io.hpp"
#include "dimcut/rng.hpp"

namespace dimcut {

namespace {

bool valid_column_name(std::string_view name) {
  return !name.empty() && std::all_of(name.begin(), name.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_';
  });
}

std::string_view trim(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  return text;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      return fields;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view to_string(ProblemType type) noexcept {
  return type == ProblemType::Regression ? "regression" : "classification";
}

ProblemType parse_problem_type(std::string_view text) {
  const std::string value = lower(trim(text));
  if (value == "regression") return ProblemType::Regression;
  if (value == "classification") return ProblemType::Classification;
  throw std::invalid_argument("unknown problem type '" + std::string(text) +
                              "' (expected regression or classification)");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw std::invalid_argument("matrix data size does not match its shape");
  }
}

std::vector<double> Matrix::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

Dataset::Dataset(std::vector<std::string> feature_names, Matrix features,
                 std::vector<double> target, ProblemType problem_type, std::string target_name)
    : feature_names_(std::move(feature_names)),
      features_(std::move(features)),
      target_(std::move(target)),
      problem_type_(problem_type),
      target_name_(std::move(target_name)) {
  if (features_.cols() < 1) throw std::invalid_argument("dataset needs at least one feature");
  if (features_.rows() < 2) throw std::invalid_argument("dataset needs at least two rows");
  if (feature_names_.size() != features_.cols()) {
    throw std::invalid_argument("feature name count does not match feature column count");
  }
  if (target_.size() != features_.rows()) {
    throw std::invalid_argument("target length does not match row count");
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& name : feature_names_) {
    if (!seen.insert(name).second) {
      throw std::invalid_argument("duplicate feature name '" + name + "'");
    }
  }
  for (double v : features_.values()) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite feature value");
  }
  for (double v : target_) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite target value");
  }

  if (problem_type_ == ProblemType::Classification) {
    double max_label = -1.0;
    for (std::size_t i = 0; i < target_.size(); ++i) {
      const double v = target_[i];
      if (v < 0.0 || v != std::floor(v) || v > 1e9) {
        throw std::invalid_argument("class label at row " + std::to_string(i) +
                                    " is not a nonnegative integer");
      }
      max_label = std::max(max_label, v);
    }
    n_classes_ = static_cast<std::size_t>(max_label) + 1;
    if (n_classes_ < 2) throw std::invalid_argument("classification target has a single class");
    std::vector<bool> present(n_classes_, false);
    for (double v : target_) present[static_cast<std::size_t>(v)] = true;
    for (std::size_t c = 0; c < n_classes_; ++c) {
      if (!present[c]) {
        throw std::invalid_argument("class " + std::to_string(c) +
                                    " has no rows (labels must cover 0..n_classes-1)");
      }
    }
  }
}

Dataset Dataset::select_columns(std::span<const std::size_t> columns) const {
  std::vector<std::string> names;
  names.reserve(columns.size());
  Matrix out(n_rows(), columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j] >= n_features()) throw std::out_of_range("column index out of range");
    names.push_back(feature_names_[columns[j]]);
    for (std::size_t r = 0; r < n_rows(); ++r) out(r, j) = features_(r, columns[j]);
  }
  return with_features(std::move(names), std::move(out));
}

Dataset Dataset::with_features(std::vector<std::string> names, Matrix features) const {
  return Dataset(std::move(names), std::move(features), target_, problem_type_, target_name_);
}

CsvError::CsvError(const std::string& message, std::size_t row, std::size_t column)
    : std::runtime_error(row == 0 ? message
                                  : "row " + std::to_string(row) +
                                        (column == 0 ? std::string()
                                                     : ", column " + std::to_string(column)) +
                                        ": " + message),
      row_(row),
      column_(column) {}

Dataset parse_csv(std::string_view text, ProblemType problem_type) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw CsvError("empty file");

  const auto header = split_fields(lines.front());
  if (header.size() < 2) throw CsvError("need at least one feature column and a target", 1);
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (!valid_column_name(header[c])) {
      throw CsvError("column name '" + std::string(header[c]) +
                         "' must be non-empty and use only [A-Za-z0-9_]",
                     1, c + 1);
    }
  }
  const std::size_t n_cols = header.size();
  const std::size_t n_features = n_cols - 1;
  const std::size_t n_rows = lines.size() - 1;
  if (n_rows == 0) throw CsvError("no data rows");

  std::vector<double> values(n_rows * n_features);
  std::vector<double> target(n_rows);
  for (std::size_t r = 0; r < n_rows; ++r) {
    const std::size_t file_row = r + 2;
    const auto fields = split_fields(lines[r + 1]);
    if (fields.size() != n_cols) {
      throw CsvError("expected " + std::to_string(n_cols) + " fields, found " +
                         std::to_string(fields.size()),
                     file_row);
    }
    for (std::size_t c = 0; c < n_cols; ++c) {
      const std::string_view cell = fields[c];
      double v = 0.0;
      const char* first = cell.data();
      const char* last = cell.data() + cell.size();
      if (!cell.empty() && *first == '+') ++first;
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (cell.empty() || ec != std::errc{} || ptr != last || !std::isfinite(v)) {
        throw CsvError("cannot parse '" + std::string(cell) + "' as a finite number", file_row,
                       c + 1);
      }
      if (c < n_features) {
        values[r * n_features + c] = v;
      } else {
        if (problem_type == ProblemType::Classification && (v < 0 || v != std::floor(v))) {
          throw CsvError("class label '" + std::string(cell) + "' is not a nonnegative integer",
                         file_row, c + 1);
        }
        target[r] = v;
      }
    }
  }

  std::vector<std::string> names(header.begin(), header.end() - 1);
  try {
    return Dataset(std::move(names), Matrix(n_rows, n_features, std::move(values)),
                   std::move(target), problem_type, std::string(header.back()));
  } catch (const std::invalid_argument& e) {
    throw CsvError(e.what());
  }
}

Dataset load_csv(const std::filesystem::path& path, ProblemType problem_type) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::runtime_error& e) {
    throw CsvError(e.what());
  }
  return parse_csv(text, problem_type);
}

std::string format_csv(const Dataset& dataset) {
  for (const auto& name : dataset.feature_names()) {
    if (!valid_column_name(name)) {
      throw std::invalid_argument("column name '" + name + "' is not CSV-safe");
    }
  }
  std::string out;
  out.reserve(dataset.n_rows() * (dataset.n_features() + 1) * 20);
  for (const auto& name : dataset.feature_names()) {
    out += name;
    out += ',';
  }
  out += dataset.target_name();
  out += '\n';
  char buf[32];
  const auto& x = dataset.features();
  for (std::size_t r = 0; r < dataset.n_rows(); ++r) {
    for (double v : x.row(r)) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
      out.append(buf, ptr);
      out += ',';
    }
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, dataset.target()[r]);
    out.append(buf, ptr);
    out += '\n';
  }
  return out;
}

void save_csv(const Dataset& dataset, const std::filesystem::path& path) {
  write_file_atomic(path, format_csv(dataset));
}

void SynthSpec::validate() const {
  if (n_rows < 2) throw std::invalid_argument("n_rows must be at least 2");
  if (n_features < 1) throw std::invalid_argument("n_features must be positive");
  if (informative() > n_features) {
    throw std::invalid_argument("n_informative must not exceed n_features");
  }
  if (problem_type == ProblemType::Regression) {
    if (!(noise_scale >= 0.0) || !std::isfinite(noise_scale)) {
      throw std::invalid_argument("noise_scale must be a nonnegative finite number");
    }
  } else {
    if (n_classes < 2) throw std::invalid_argument("n_classes must be at least 2");
    if (informative() < 63 && n_classes > (std::uint64_t{1} << informative())) {
      throw std::invalid_argument("n_classes = " + std::to_string(n_classes) +
                                  " exceeds the 2^" + std::to_string(informative()) +
                                  " hypercube vertices available");
    }
    if (n_rows < n_classes) throw std::invalid_argument("n_rows must be at least n_classes");
  }
}

SynthSpec parse_synth_spec(std::string_view text) {
  const auto fields = split_fields(text);
  if (fields.size() < 3) {
    throw std::invalid_argument("synthetic spec needs at least 'type,rows,features'");
  }
  auto parse_count = [](std::string_view field, const char* what) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
      throw std::invalid_argument(std::string("invalid ") + what + " '" + std::string(field) +
                                  "'");
    }
    return value;
  };
  SynthSpec spec;
  spec.problem_type = parse_problem_type(fields[0]);
  spec.n_rows = parse_count(fields[1], "row count");
  spec.n_features = parse_count(fields[2], "feature count");
  for (std::size_t i = 3; i < fields.size(); ++i) {
    const std::size_t eq = fields[i].find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("expected key=value, got '" + std::string(fields[i]) + "'");
    }
    const std::string key = lower(trim(fields[i].substr(0, eq)));
    const std::string_view value = trim(fields[i].substr(eq + 1));
    if (key == "seed") {
      std::uint64_t seed = 0;
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), seed);
      if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw std::invalid_argument("invalid seed '" + std::string(value) + "'");
      }
      spec.seed = seed;
    } else if (key == "informative") {
      spec.n_informative = parse_count(value, "informative count");
    } else if (key == "classes") {
      spec.n_classes = parse_count(value, "class count");
    } else if (key == "noise") {
      double noise = 0.0;
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), noise);
      if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw std::invalid_argument("invalid noise '" + std::string(value) + "'");
      }
      spec.noise_scale = noise;
    } else {
      throw std::invalid_argument("unknown synthetic spec key '" + key + "'");
    }
  }
  spec.validate();
  return spec;
}

namespace {

std::vector<std::string> default_names(std::size_t n) {
  std::vector<std::string> names(n);
  for (std::size_t j = 0; j < n; ++j) names[j] = "x" + std::to_string(j);
  return names;
}

// Greedy max-min Hamming-distance vertex placement on {-1,+1}^dims.
std::vector<std::vector<double>> choose_vertices(std::size_t n_classes, std::size_t dims,
                                                 Rng& rng) {
  std::vector<std::vector<double>> chosen;
  chosen.reserve(n_classes);
  if (dims <= 16) {
    const std::size_t n_vertices = std::size_t{1} << dims;
    auto to_vertex = [dims](std::size_t code) {
      std::vector<double> v(dims);
      for (std::size_t d = 0; d < dims; ++d) v[d] = ((code >> d) & 1U) ? 1.0 : -1.0;
      return v;
    };
    std::vector<std::size_t> min_dist(n_vertices, std::numeric_limits<std::size_t>::max());
    std::size_t code = static_cast<std::size_t>(rng.uniform_index(n_vertices));
    for (std::size_t k = 0; k < n_classes; ++k) {
      chosen.push_back(to_vertex(code));
      for (std::size_t v = 0; v < n_vertices; ++v) {
        const auto d = static_cast<std::size_t>(std::popcount(v ^ code));
        min_dist[v] = std::min(min_dist[v], d);
      }
      std::size_t best = 0;
      for (std::size_t v = 1; v < n_vertices; ++v) {
        if (min_dist[v] > min_dist[best]) best = v;
      }
      code = best;
    }
    return chosen;
  }

  auto random_vertex = [&] {
    std::vector<double> v(dims);
    for (auto& x : v) x = (rng.next_u64() >> 63) ? 1.0 : -1.0;
    return v;
  };
  auto hamming = [](const std::vector<double>& a, const std::vector<double>& b) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return d;
  };
  chosen.push_back(random_vertex());
  while (chosen.size() < n_classes) {
    std::vector<double> best;
    std::size_t best_dist = 0;
    for (int attempt = 0; attempt < 256 || best_dist == 0; ++attempt) {
      auto candidate = random_vertex();
      std::size_t d = std::numeric_limits<std::size_t>::max();
      for (const auto& c : chosen) d = std::min(d, hamming(candidate, c));
      if (d > best_dist) {
        best_dist = d;
        best = std::move(candidate);
      }
    }
    chosen.push_back(std::move(best));
  }
  return chosen;
}

}  // namespace

Dataset make_regression(const SynthSpec& spec, std::vector<double>* weights) {
  spec.validate();
  if (spec.problem_type != ProblemType::Regression) {
    throw std::invalid_argument("make_regression needs a regression spec");
  }
  Rng rng(spec.seed);
  const std::size_t informative = spec.informative();
  std::vector<double> w(spec.n_features, 0.0);
  for (std::size_t j = 0; j < informative; ++j) w[j] = rng.uniform(1.0, 100.0);

  Matrix x(spec.n_rows, spec.n_features);
  for (double& v : x.values()) v = rng.normal();

  std::vector<double> y(spec.n_rows);
  for (std::size_t r = 0; r < spec.n_rows; ++r) {
    double acc = 0.0;
    const auto row = x.row(r);
    for (std::size_t j = 0; j < informative; ++j) acc += row[j] * w[j];
    y[r] = acc;
  }
  if (spec.noise_scale > 0.0) {
    for (double& v : y) v += spec.noise_scale * rng.normal();
  }
  if (weights) *weights = w;
  return Dataset(default_names(spec.n_features), std::move(x), std::move(y),
                 ProblemType::Regression);
}

Dataset make_classification(const SynthSpec& spec,
                            std::vector<std::vector<double>>* centroids) {
  spec.validate();
  if (spec.problem_type != ProblemType::Classification) {
    throw std::invalid_argument("make_classification needs a classification spec");
  }
  Rng rng(spec.seed);
  const std::size_t informative = spec.informative();
  const auto vertices = choose_vertices(spec.n_classes, informative, rng);

  std::vector<double> labels(spec.n_rows);
  for (std::size_t r = 0; r < spec.n_rows; ++r) {
    labels[r] = static_cast<double>(r % spec.n_classes);
  }
  rng.shuffle(std::span<double>(labels));

  Matrix x(spec.n_rows, spec.n_features);
  for (std::size_t r = 0; r < spec.n_rows; ++r) {
    auto row = x.row(r);
    const auto& centre = vertices[static_cast<std::size_t>(labels[r])];
    for (std::size_t j = 0; j < spec.n_features; ++j) {
      row[j] = rng.normal() + (j < informative ? centre[j] : 0.0);
    }
  }
  if (centroids) *centroids = vertices;
  return Dataset(default_names(spec.n_features), std::move(x), std::move(labels),
                 ProblemType::Classification);
}

Dataset make_dataset(const SynthSpec& spec) {
  return spec.problem_type == ProblemType::Regression ? make_regression(spec)
                                                      : make_classification(spec);
}

}  // namespace dimcut
