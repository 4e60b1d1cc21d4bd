#include "dimcut/importance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dimcut {

std::string_view to_string(ImportanceSource source) noexcept {
  return source == ImportanceSource::Forest ? "forest" : "pca";
}

ImportanceVector::ImportanceVector(std::vector<double> scores, ImportanceSource source)
    : scores_(std::move(scores)), source_(source) {
  if (scores_.empty()) throw std::invalid_argument("importance vector is empty");
  double total = 0.0;
  for (double s : scores_) {
    if (!(s >= 0.0) || !std::isfinite(s)) {
      throw std::invalid_argument("importance scores must be finite and nonnegative");
    }
    total += s;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("importance scores must sum to 1");
  }
  order_.resize(scores_.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(),
                   [this](std::size_t a, std::size_t b) { return scores_[a] > scores_[b]; });
}

ImportanceVector ImportanceVector::normalize(std::vector<double> raw, ImportanceSource source) {
  if (raw.empty()) throw std::invalid_argument("importance vector is empty");
  double total = 0.0;
  for (double& s : raw) {
    if (!std::isfinite(s)) throw std::invalid_argument("non-finite importance");
    // Rounding in impurity differences can leave tiny negatives.
    if (s < 0.0) s = 0.0;
    total += s;
  }
  if (total <= 0.0) {
    std::fill(raw.begin(), raw.end(), 1.0 / static_cast<double>(raw.size()));
  } else {
    for (double& s : raw) s /= total;
  }
  return ImportanceVector(std::move(raw), source);
}

std::vector<double> ImportanceVector::sorted() const {
  std::vector<double> out(order_.size());
  for (std::size_t i = 0; i < order_.size(); ++i) out[i] = scores_[order_[i]];
  return out;
}

}  // namespace dimcut
