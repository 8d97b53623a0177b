#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lml {

struct DenseLayer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;
};

/// Fully connected network: ReLU between layers, linear output layer.
struct MlpModel {
  std::vector<DenseLayer> layers;

  /// He-uniform weights and zero biases drawn from a seeded generator.
  /// An empty `hidden` list gives a single linear layer.
  static MlpModel random(int input_dim, const std::vector<int>& hidden,
                         int output_dim, std::uint64_t seed);
  static MlpModel zeros(int input_dim, const std::vector<int>& hidden,
                        int output_dim);

  int input_dim() const;
  int output_dim() const;
  std::size_t parameter_count() const;

  /// Hex FNV-1a hash of every parameter's bit pattern.
  std::string digest() const;
};

/// Parameter gradients, shaped like the model.
struct MlpGradients {
  std::vector<DenseLayer> layers;

  static MlpGradients zeros_like(const MlpModel& model);
  void set_zero();
};

/// Pre-activations of every layer for one input; consumed by backward().
struct ForwardTrace {
  Eigen::VectorXd input;
  std::vector<Eigen::VectorXd> pre;  // one per layer; the last is the scores
};

std::vector<double> forward(const MlpModel& model,
                            std::span<const double> features);
ForwardTrace forward_trace(const MlpModel& model,
                           std::span<const double> features);

/// Adds d(scores . grad_scores)/d(theta) into `grads`. ReLU'(0) is taken as 0.
void accumulate_backward(const MlpModel& model, const ForwardTrace& trace,
                         std::span<const double> grad_scores,
                         MlpGradients& grads);

MlpGradients backward(const MlpModel& model, std::span<const double> features,
                      std::span<const double> grad_scores);

/// theta <- theta - step * grads
void sgd_step(MlpModel& model, const MlpGradients& grads, double step);

}  // namespace lml
