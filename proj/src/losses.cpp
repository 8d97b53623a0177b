#include "lml/losses.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "lml/sigmoid.hpp"

namespace lml {

namespace {

void validate_scores(std::span<const double> s) {
  if (s.empty()) throw std::invalid_argument("empty score vector");
  for (double v : s) {
    if (!std::isfinite(v)) throw std::invalid_argument("score is not finite");
  }
}

void validate_observed(const LabelSet& observed, std::size_t n) {
  if (observed.empty())
    throw std::invalid_argument("observed label set must be non-empty");
  observed.check_bounds(n);
}

void validate_truncation_k(std::size_t n, int k) {
  if (k < 1 || static_cast<std::size_t>(k) >= n)
    throw std::domain_error("k must satisfy 1 <= k <= n-1 (n=" +
                            std::to_string(n) + ", k=" + std::to_string(k) +
                            ")");
}

std::size_t kept_competitors(std::size_t n, int k, std::size_t available,
                             Truncation t) {
  const std::ptrdiff_t keep = static_cast<std::ptrdiff_t>(n) - k -
                              (t == Truncation::kKeepNMinusKMinusOne ? 1 : 0);
  return std::min(available, static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, keep)));
}

// Smallest-first order; among equal scores the higher index counts as smaller.
void sort_ascending(std::vector<int>& idx, std::span<const double> s) {
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    return s[a] < s[b] || (s[a] == s[b] && a > b);
  });
}

// Adds d/ds log(1 + sum_{j in J} exp(s_j - s_target)) into grad and returns
// the value.
double truncated_term(std::span<const double> s, int target,
                      std::span<const int> truncated, std::vector<double>& grad) {
  double shift = 0.0;
  for (int j : truncated) shift = std::max(shift, s[j] - s[target]);
  double denom = std::exp(-shift);
  for (int j : truncated) denom += std::exp(s[j] - s[target] - shift);
  const double value = shift + std::log(denom);
  for (int j : truncated) {
    const double p = std::exp(s[j] - s[target] - value);
    grad[j] += p;
    grad[target] -= p;
  }
  return value;
}

double log_sum_exp(std::span<const double> x) {
  const double m = *std::max_element(x.begin(), x.end());
  double acc = 0.0;
  for (double v : x) acc += std::exp(v - m);
  return m + std::log(acc);
}

}  // namespace

LossValue lml_nll_loss(std::span<const double> x, int k,
                       const LabelSet& observed, const SolverConfig& cfg,
                       LmlPoint* projection) {
  validate_logits(x);
  validate_observed(observed, x.size());
  const LmlPoint y = lml_project(x, k, cfg);

  LossValue out;
  std::vector<double> upstream(x.size(), 0.0);
  for (int j : observed) {
    out.value -= std::log(y.probs[j]);
    upstream[j] = -1.0 / y.probs[j];
  }
  out.grad = lml_backward(y, upstream);
  if (projection) *projection = y;
  return out;
}

LossValue truncated_topk_entropy(std::span<const double> scores, int label,
                                 int k, Truncation truncation) {
  validate_scores(scores);
  const std::size_t n = scores.size();
  if (label < 0 || static_cast<std::size_t>(label) >= n)
    throw std::invalid_argument("label " + std::to_string(label) +
                                " out of range");
  validate_truncation_k(n, k);

  std::vector<int> competitors;
  competitors.reserve(n - 1);
  for (int j = 0; j < static_cast<int>(n); ++j) {
    if (j != label) competitors.push_back(j);
  }
  sort_ascending(competitors, scores);
  competitors.resize(kept_competitors(n, k, competitors.size(), truncation));

  LossValue out;
  out.grad.assign(n, 0.0);
  out.value = truncated_term(scores, label, competitors, out.grad);
  return out;
}

LossValue multilabel_truncated_topk_entropy(std::span<const double> scores,
                                            const LabelSet& observed, int k,
                                            Truncation truncation) {
  validate_scores(scores);
  const std::size_t n = scores.size();
  validate_observed(observed, n);
  validate_truncation_k(n, k);

  std::vector<int> competitors;
  competitors.reserve(n - observed.size());
  for (int j = 0; j < static_cast<int>(n); ++j) {
    if (!observed.contains(j)) competitors.push_back(j);
  }
  sort_ascending(competitors, scores);
  competitors.resize(kept_competitors(n, k, competitors.size(), truncation));

  LossValue out;
  out.grad.assign(n, 0.0);
  for (int i : observed)
    out.value += truncated_term(scores, i, competitors, out.grad);
  return out;
}

LossValue sigmoid_collapse_loss(std::span<const double> x,
                                const LabelSet& observed) {
  validate_scores(x);
  validate_observed(observed, x.size());
  LossValue out;
  out.grad.assign(x.size(), 0.0);
  for (int j : observed) {
    // -log sigmoid(t) = log1p(exp(-|t|)) + max(-t, 0)
    const double t = x[j];
    out.value += std::log1p(std::exp(-std::abs(t))) + std::max(-t, 0.0);
    out.grad[j] = sigmoid(t) - 1.0;
  }
  return out;
}

LossValue softmax_cross_entropy(std::span<const double> x,
                                const LabelSet& observed) {
  validate_scores(x);
  validate_observed(observed, x.size());
  const double lse = log_sum_exp(x);
  const auto count = static_cast<double>(observed.size());
  LossValue out;
  out.grad.resize(x.size());
  for (std::size_t j = 0; j < x.size(); ++j)
    out.grad[j] = count * std::exp(x[j] - lse);
  for (int j : observed) {
    out.value += lse - x[j];
    out.grad[j] -= 1.0;
  }
  return out;
}

}  // namespace lml
