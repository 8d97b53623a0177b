#pragma once

#include <cstdint>
#include <vector>

#include "lml/labels.hpp"

namespace lml {

struct Sample {
  std::vector<double> features;
  LabelSet ground_truth;  // exactly k labels
  LabelSet observed;      // non-empty subset of ground_truth
};

/// Multi-label data with a planted linear ground truth and censored labels.
struct SyntheticTask {
  int n = 0;
  int k = 0;
  int input_dim = 0;
  double observe_prob = 1.0;
  std::uint64_t seed = 0;
  std::vector<Sample> samples;
};

/// Draws W (input_dim x n) and standard-normal features, labels each sample
/// with the top-k entries of W^T features, then keeps every true label with
/// probability observe_prob, redrawing until at least one survives.
SyntheticTask generate_task(int n, int k, int input_dim, int num_samples,
                            double observe_prob, std::uint64_t seed);

}  // namespace lml
