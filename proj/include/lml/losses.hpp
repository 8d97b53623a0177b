#pragma once

#include <span>
#include <vector>

#include "lml/labels.hpp"
#include "lml/projection.hpp"

namespace lml {

/// Loss value and its gradient w.r.t. the raw scores.
struct LossValue {
  double value = 0.0;
  std::vector<double> grad;
};

/// Size of the truncated competitor set J used by the top-k entropy losses.
///
/// Competitors are the labels outside the target set Y. kKeepNMinusK keeps
/// the n-k smallest competitor scores, i.e. it drops the k-|Y| largest ones;
/// with one label and k = 1 this is the ordinary softmax cross-entropy.
/// kKeepNMinusKMinusOne drops one more competitor, so a single-label loss
/// with k = n-1 is identically zero.
enum class Truncation { kKeepNMinusK, kKeepNMinusKMinusOne };

/// -sum_{j in observed} log y_j with y = lml_project(x, k); the gradient is
/// pulled back through lml_backward. The projection is copied to
/// `projection` when it is non-null.
LossValue lml_nll_loss(std::span<const double> x, int k,
                       const LabelSet& observed, const SolverConfig& cfg = {},
                       LmlPoint* projection = nullptr);

/// log(1 + sum_{j in J} exp(s_j - s_label)), J being the truncated set of
/// competitors. J is held fixed when differentiating.
LossValue truncated_topk_entropy(
    std::span<const double> scores, int label, int k,
    Truncation truncation = Truncation::kKeepNMinusK);

/// Sum over observed labels i of log(1 + sum_{j in J} exp(s_j - s_i)), with
/// J chosen once among the non-observed labels. With a single observed label
/// this equals truncated_topk_entropy under the same truncation.
LossValue multilabel_truncated_topk_entropy(
    std::span<const double> scores, const LabelSet& observed, int k,
    Truncation truncation = Truncation::kKeepNMinusK);

/// -sum_{j in observed} log sigmoid(x_j): independent per-label likelihood on
/// the unit hypercube. Only observed labels are penalized, so minimizing it
/// drives every score upward.
LossValue sigmoid_collapse_loss(std::span<const double> x,
                                const LabelSet& observed);

/// -sum_{j in observed} log softmax(x)_j.
LossValue softmax_cross_entropy(std::span<const double> x,
                                const LabelSet& observed);

}  // namespace lml
