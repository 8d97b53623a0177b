#include "lml/labels.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace lml {

LabelSet::LabelSet(std::initializer_list<int> labels)
    : LabelSet(std::vector<int>(labels)) {}

LabelSet::LabelSet(std::vector<int> labels) : labels_(std::move(labels)) {
  std::sort(labels_.begin(), labels_.end());
  if (std::adjacent_find(labels_.begin(), labels_.end()) != labels_.end())
    throw std::invalid_argument("label set contains duplicate indices");
  if (!labels_.empty() && labels_.front() < 0)
    throw std::invalid_argument("label indices must be non-negative");
}

bool LabelSet::contains(int label) const {
  return std::binary_search(labels_.begin(), labels_.end(), label);
}

void LabelSet::check_bounds(std::size_t n) const {
  if (!labels_.empty() && static_cast<std::size_t>(labels_.back()) >= n) {
    throw std::invalid_argument("label " + std::to_string(labels_.back()) +
                                " out of range for " + std::to_string(n) +
                                " scores");
  }
}

LabelSet predict_top_k(std::span<const double> scores, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > scores.size())
    throw std::domain_error("predict_top_k needs 1 <= k <= n (n=" +
                            std::to_string(scores.size()) +
                            ", k=" + std::to_string(k) + ")");
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + k, order.end(),
                    [&](int a, int b) {
                      return scores[a] > scores[b] ||
                             (scores[a] == scores[b] && a < b);
                    });
  order.resize(static_cast<std::size_t>(k));
  return LabelSet(std::move(order));
}

double recall(const LabelSet& observed, const LabelSet& predicted) {
  if (observed.empty())
    throw std::invalid_argument("recall is undefined for an empty label set");
  const auto hits = std::count_if(observed.begin(), observed.end(),
                                  [&](int j) { return predicted.contains(j); });
  return static_cast<double>(hits) / static_cast<double>(observed.size());
}

int zero_one_error(const LabelSet& observed, const LabelSet& predicted) {
  return observed == predicted ? 0 : 1;
}

}  // namespace lml
