#include "lml/task.hpp"

#include <random>
#include <stdexcept>
#include <string>

namespace lml {

SyntheticTask generate_task(int n, int k, int input_dim, int num_samples,
                            double observe_prob, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("need at least 2 labels");
  if (k < 1 || k > n - 1)
    throw std::domain_error("k must satisfy 1 <= k <= n-1 (n=" +
                            std::to_string(n) + ", k=" + std::to_string(k) + ")");
  if (input_dim < 1) throw std::invalid_argument("input_dim must be positive");
  if (num_samples < 1) throw std::invalid_argument("num_samples must be positive");
  if (!(observe_prob > 0.0 && observe_prob <= 1.0))
    throw std::invalid_argument("observe_prob must lie in (0, 1]");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::bernoulli_distribution keep(observe_prob);

  // planted[i * n + j] = W(i, j)
  std::vector<double> planted(static_cast<std::size_t>(input_dim) * n);
  for (double& w : planted) w = normal(rng);

  SyntheticTask task{n, k, input_dim, observe_prob, seed, {}};
  task.samples.reserve(static_cast<std::size_t>(num_samples));
  std::vector<double> scores(static_cast<std::size_t>(n));
  for (int s = 0; s < num_samples; ++s) {
    Sample sample;
    sample.features.resize(static_cast<std::size_t>(input_dim));
    for (double& f : sample.features) f = normal(rng);

    std::fill(scores.begin(), scores.end(), 0.0);
    for (int i = 0; i < input_dim; ++i)
      for (int j = 0; j < n; ++j)
        scores[j] += planted[static_cast<std::size_t>(i) * n + j] * sample.features[i];
    sample.ground_truth = predict_top_k(scores, k);

    std::vector<int> observed;
    while (observed.empty()) {
      for (int j : sample.ground_truth) {
        if (keep(rng)) observed.push_back(j);
      }
    }
    sample.observed = LabelSet(std::move(observed));
    task.samples.push_back(std::move(sample));
  }
  return task;
}

}  // namespace lml
