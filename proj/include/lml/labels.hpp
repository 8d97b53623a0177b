#pragma once

#include <initializer_list>
#include <span>
#include <vector>

namespace lml {

/// Sorted set of distinct label indices.
class LabelSet {
 public:
  LabelSet() = default;
  LabelSet(std::initializer_list<int> labels);
  explicit LabelSet(std::vector<int> labels);

  std::span<const int> indices() const { return labels_; }
  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  bool contains(int label) const;

  // Throws std::invalid_argument if any index falls outside [0, n).
  void check_bounds(std::size_t n) const;

  auto begin() const { return labels_.begin(); }
  auto end() const { return labels_.end(); }

  friend bool operator==(const LabelSet&, const LabelSet&) = default;

 private:
  std::vector<int> labels_;
};

/// The k highest-scoring indices. Ties at the threshold go to the lower index.
LabelSet predict_top_k(std::span<const double> scores, int k);

/// Fraction of observed labels that appear in the prediction.
double recall(const LabelSet& observed, const LabelSet& predicted);

/// 0 when the two sets are identical, 1 otherwise.
int zero_one_error(const LabelSet& observed, const LabelSet& predicted);

}  // namespace lml
