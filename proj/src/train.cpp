#include "lml/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "lml/sigmoid.hpp"

namespace lml {

namespace {

void check_feasible(const LmlPoint& y) {
  const double n = static_cast<double>(y.size());
  double sum = 0.0;
  for (double p : y.probs) {
    if (!(p > 0.0 && p < 1.0))
      throw std::logic_error("projection left the open unit hypercube");
    sum += p;
  }
  if (std::abs(sum - y.k) > 1e-8 * n)
    throw std::logic_error("projection violates the sum-to-k constraint");
}

std::vector<double> softmax(std::span<const double> x) {
  const double m = *std::max_element(x.begin(), x.end());
  std::vector<double> p(x.size());
  double z = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) z += p[i] = std::exp(x[i] - m);
  for (double& v : p) v /= z;
  return p;
}

}  // namespace

LossKind parse_loss(std::string_view name) {
  if (name == "lml") return LossKind::kLml;
  if (name == "truncated_entropy") return LossKind::kTruncatedEntropy;
  if (name == "multilabel_truncated_entropy")
    return LossKind::kMultilabelTruncatedEntropy;
  if (name == "sigmoid") return LossKind::kSigmoid;
  if (name == "softmax_ce") return LossKind::kSoftmaxCe;
  throw std::invalid_argument("unknown loss '" + std::string(name) + "'");
}

std::string_view loss_name(LossKind kind) {
  switch (kind) {
    case LossKind::kLml: return "lml";
    case LossKind::kTruncatedEntropy: return "truncated_entropy";
    case LossKind::kMultilabelTruncatedEntropy: return "multilabel_truncated_entropy";
    case LossKind::kSigmoid: return "sigmoid";
    case LossKind::kSoftmaxCe: return "softmax_ce";
  }
  return "unknown";
}

void TrainConfig::validate() const {
  if (!(lr >= 0.0) || !std::isfinite(lr))
    throw std::invalid_argument("lr must be finite and non-negative");
  if (epochs < 1) throw std::invalid_argument("epochs must be positive");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be positive");
  solver.validate();
}

LossValue sample_loss(LossKind kind, std::span<const double> scores,
                      const Sample& sample, int k, const TrainConfig& cfg,
                      std::vector<double>* probs) {
  switch (kind) {
    case LossKind::kLml: {
      LmlPoint y;
      LossValue v = lml_nll_loss(scores, k, sample.observed, cfg.solver, &y);
      if (cfg.check_feasibility) check_feasible(y);
      if (probs) *probs = std::move(y.probs);
      return v;
    }
    case LossKind::kTruncatedEntropy: {
      // Each observed label is scored as its own single-label example.
      LossValue total;
      total.grad.assign(scores.size(), 0.0);
      for (int label : sample.observed) {
        const LossValue v = truncated_topk_entropy(scores, label, k, cfg.truncation);
        total.value += v.value;
        for (std::size_t j = 0; j < scores.size(); ++j) total.grad[j] += v.grad[j];
      }
      if (probs) *probs = softmax(scores);
      return total;
    }
    case LossKind::kMultilabelTruncatedEntropy:
      if (probs) *probs = softmax(scores);
      return multilabel_truncated_topk_entropy(scores, sample.observed, k,
                                               cfg.truncation);
    case LossKind::kSigmoid:
      if (probs) {
        probs->resize(scores.size());
        std::transform(scores.begin(), scores.end(), probs->begin(),
                       [](double s) { return sigmoid(s); });
      }
      return sigmoid_collapse_loss(scores, sample.observed);
    case LossKind::kSoftmaxCe:
      if (probs) *probs = softmax(scores);
      return softmax_cross_entropy(scores, sample.observed);
  }
  throw std::invalid_argument("unknown loss kind");
}

TrainReport train_loop(const SyntheticTask& task, const TrainConfig& cfg) {
  cfg.validate();
  if (task.samples.empty()) throw std::invalid_argument("task has no samples");

  TrainReport report;
  report.model = MlpModel::random(task.input_dim, cfg.hidden, task.n, cfg.seed);
  report.initial_digest = report.model.digest();
  MlpModel& model = report.model;

  std::mt19937_64 shuffle_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::size_t> order(task.samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  MlpGradients grads = MlpGradients::zeros_like(model);
  std::vector<double> scaled;
  std::vector<double> probs;

  const auto diverged = [](double v, const char* where) {
    if (!std::isfinite(v))
      throw DivergenceError(std::string("loss became non-finite during ") + where);
  };
  const auto check_scores = [](std::span<const double> scores) {
    for (double v : scores) {
      if (!std::isfinite(v))
        throw DivergenceError("model produced non-finite scores");
    }
  };

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t stop =
          std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      const double inv_batch = 1.0 / static_cast<double>(stop - start);
      grads.set_zero();
      for (std::size_t b = start; b < stop; ++b) {
        const Sample& s = task.samples[order[b]];
        const ForwardTrace trace = forward_trace(model, s.features);
        const Eigen::VectorXd& out = trace.pre.back();
        const std::span<const double> scores(out.data(), static_cast<std::size_t>(out.size()));
        check_scores(scores);
        const LossValue loss = sample_loss(cfg.loss, scores, s, task.k, cfg);
        diverged(loss.value, "training");
        scaled.resize(loss.grad.size());
        for (std::size_t j = 0; j < scaled.size(); ++j)
          scaled[j] = loss.grad[j] * inv_batch;
        accumulate_backward(model, trace, scaled, grads);
      }
      sgd_step(model, grads, cfg.lr);
    }

    EpochMetrics m;
    m.epoch = epoch;
    double prob_sum = 0.0;
    for (const Sample& s : task.samples) {
      const std::vector<double> scores = forward(model, s.features);
      check_scores(scores);
      const LossValue loss = sample_loss(cfg.loss, scores, s, task.k, cfg, &probs);
      diverged(loss.value, "evaluation");
      const LabelSet predicted = predict_top_k(scores, task.k);
      m.loss += loss.value;
      m.gt_recall += recall(s.ground_truth, predicted);
      m.obs_recall += recall(s.observed, predicted);
      m.zero_one_error += zero_one_error(s.ground_truth, predicted);
      prob_sum += std::accumulate(probs.begin(), probs.end(), 0.0) /
                  static_cast<double>(probs.size());
    }
    const double count = static_cast<double>(task.samples.size());
    m.loss /= count;
    m.gt_recall /= count;
    m.obs_recall /= count;
    m.zero_one_error /= count;
    m.mean_prob = prob_sum / count;
    report.epochs.push_back(m);
  }
  report.final_digest = model.digest();
  return report;
}

std::string report_csv(const TrainReport& report) {
  std::string out = "epoch,loss,gt_recall,obs_recall,zero_one_error\n";
  char line[160];
  for (const auto& m : report.epochs) {
    std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%.17g,%.17g\n", m.epoch,
                  m.loss, m.gt_recall, m.obs_recall, m.zero_one_error);
    out += line;
  }
  return out;
}

nlohmann::json report_json(const TrainReport& report) {
  nlohmann::json epochs = nlohmann::json::array();
  for (const auto& m : report.epochs) {
    epochs.push_back({{"epoch", m.epoch},
                      {"loss", m.loss},
                      {"gt_recall", m.gt_recall},
                      {"obs_recall", m.obs_recall},
                      {"zero_one_error", m.zero_one_error},
                      {"mean_prob", m.mean_prob}});
  }
  return {{"epochs", std::move(epochs)},
          {"initial_digest", report.initial_digest},
          {"final_digest", report.final_digest}};
}

}  // namespace lml
