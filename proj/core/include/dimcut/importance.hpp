#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace dimcut {

enum class ImportanceSource { Forest, Pca };

std::string_view to_string(ImportanceSource source) noexcept;

/// Normalized per-feature importance with its descending ranking.
///
/// scores[i] belongs to original feature i. order lists feature indices by
/// descending score; equal scores keep the lower index first.
class ImportanceVector {
 public:
  /// scores must be nonnegative and sum to 1 within 1e-9.
  ImportanceVector(std::vector<double> scores, ImportanceSource source);

  /// Divides nonnegative raw scores by their sum. An all-zero input (nothing
  /// carried any signal) becomes the uniform vector.
  static ImportanceVector normalize(std::vector<double> raw, ImportanceSource source);

  const std::vector<double>& scores() const noexcept { return scores_; }
  const std::vector<std::size_t>& order() const noexcept { return order_; }
  ImportanceSource source() const noexcept { return source_; }
  std::size_t size() const noexcept { return scores_.size(); }

  /// Scores in descending order (scores[order[i]]).
  std::vector<double> sorted() const;

  friend bool operator==(const ImportanceVector&, const ImportanceVector&) = default;

 private:
  std::vector<double> scores_;
  std::vector<std::size_t> order_;
  ImportanceSource source_;
};

}  // namespace dimcut
