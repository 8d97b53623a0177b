#include "lml/mlp.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

namespace lml {

namespace {

std::vector<int> layer_widths(int input_dim, const std::vector<int>& hidden,
                              int output_dim) {
  if (input_dim < 1 || output_dim < 1)
    throw std::invalid_argument("model dimensions must be positive");
  std::vector<int> widths{input_dim};
  for (int h : hidden) {
    if (h < 1) throw std::invalid_argument("hidden width must be positive");
    widths.push_back(h);
  }
  widths.push_back(output_dim);
  return widths;
}

void check_input(const MlpModel& model, std::span<const double> features) {
  if (model.layers.empty()) throw std::invalid_argument("model has no layers");
  if (static_cast<int>(features.size()) != model.input_dim()) {
    throw std::invalid_argument(
        "feature length " + std::to_string(features.size()) +
        " does not match model input dim " + std::to_string(model.input_dim()));
  }
}

Eigen::Map<const Eigen::VectorXd> as_vector(std::span<const double> v) {
  return {v.data(), static_cast<Eigen::Index>(v.size())};
}

}  // namespace

MlpModel MlpModel::random(int input_dim, const std::vector<int>& hidden,
                          int output_dim, std::uint64_t seed) {
  const auto widths = layer_widths(input_dim, hidden, output_dim);
  std::mt19937_64 rng(seed);
  MlpModel m;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    const int in = widths[l];
    const int out = widths[l + 1];
    const double bound = std::sqrt(6.0 / in);
    std::uniform_real_distribution<double> dist(-bound, bound);
    DenseLayer layer{Eigen::MatrixXd(out, in), Eigen::VectorXd::Zero(out)};
    for (int i = 0; i < out; ++i)
      for (int j = 0; j < in; ++j) layer.weight(i, j) = dist(rng);
    m.layers.push_back(std::move(layer));
  }
  return m;
}

MlpModel MlpModel::zeros(int input_dim, const std::vector<int>& hidden,
                         int output_dim) {
  const auto widths = layer_widths(input_dim, hidden, output_dim);
  MlpModel m;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    m.layers.push_back({Eigen::MatrixXd::Zero(widths[l + 1], widths[l]),
                        Eigen::VectorXd::Zero(widths[l + 1])});
  }
  return m;
}

int MlpModel::input_dim() const {
  return layers.empty() ? 0 : static_cast<int>(layers.front().weight.cols());
}

int MlpModel::output_dim() const {
  return layers.empty() ? 0 : static_cast<int>(layers.back().weight.rows());
}

std::size_t MlpModel::parameter_count() const {
  std::size_t count = 0;
  for (const auto& l : layers)
    count += static_cast<std::size_t>(l.weight.size() + l.bias.size());
  return count;
}

std::string MlpModel::digest() const {
  std::uint64_t h = 1469598103934665603ULL;
  const auto mix = [&h](double v) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  for (const auto& l : layers) {
    for (Eigen::Index i = 0; i < l.weight.size(); ++i) mix(l.weight.data()[i]);
    for (Eigen::Index i = 0; i < l.bias.size(); ++i) mix(l.bias[i]);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

MlpGradients MlpGradients::zeros_like(const MlpModel& model) {
  MlpGradients g;
  for (const auto& l : model.layers) {
    g.layers.push_back({Eigen::MatrixXd::Zero(l.weight.rows(), l.weight.cols()),
                        Eigen::VectorXd::Zero(l.bias.size())});
  }
  return g;
}

void MlpGradients::set_zero() {
  for (auto& l : layers) {
    l.weight.setZero();
    l.bias.setZero();
  }
}

ForwardTrace forward_trace(const MlpModel& model,
                           std::span<const double> features) {
  check_input(model, features);
  ForwardTrace t;
  t.input = as_vector(features);
  t.pre.reserve(model.layers.size());
  Eigen::VectorXd act = t.input;
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const auto& layer = model.layers[l];
    t.pre.push_back(layer.weight * act + layer.bias);
    if (l + 1 < model.layers.size()) act = t.pre.back().cwiseMax(0.0);
  }
  return t;
}

std::vector<double> forward(const MlpModel& model,
                            std::span<const double> features) {
  const ForwardTrace t = forward_trace(model, features);
  return {t.pre.back().data(), t.pre.back().data() + t.pre.back().size()};
}

void accumulate_backward(const MlpModel& model, const ForwardTrace& trace,
                         std::span<const double> grad_scores,
                         MlpGradients& grads) {
  if (static_cast<int>(grad_scores.size()) != model.output_dim())
    throw std::invalid_argument("score gradient has wrong length");

  Eigen::VectorXd delta = as_vector(grad_scores);
  for (std::size_t l = model.layers.size(); l-- > 0;) {
    Eigen::VectorXd input =
        l == 0 ? trace.input : Eigen::VectorXd(trace.pre[l - 1].cwiseMax(0.0));
    grads.layers[l].weight.noalias() += delta * input.transpose();
    grads.layers[l].bias += delta;
    if (l == 0) break;
    Eigen::VectorXd back = model.layers[l].weight.transpose() * delta;
    delta = (trace.pre[l - 1].array() > 0.0).select(back, 0.0);
  }
}

MlpGradients backward(const MlpModel& model, std::span<const double> features,
                      std::span<const double> grad_scores) {
  MlpGradients g = MlpGradients::zeros_like(model);
  accumulate_backward(model, forward_trace(model, features), grad_scores, g);
  return g;
}

void sgd_step(MlpModel& model, const MlpGradients& grads, double step) {
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    model.layers[l].weight -= step * grads.layers[l].weight;
    model.layers[l].bias -= step * grads.layers[l].bias;
  }
}

}  // namespace lml
