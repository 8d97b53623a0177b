#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "lml/losses.hpp"
#include "lml/mlp.hpp"
#include "lml/task.hpp"

namespace lml {

enum class LossKind {
  kLml,
  kTruncatedEntropy,
  kMultilabelTruncatedEntropy,
  kSigmoid,
  kSoftmaxCe,
};

LossKind parse_loss(std::string_view name);
std::string_view loss_name(LossKind kind);

struct TrainConfig {
  LossKind loss = LossKind::kLml;
  double lr = 0.1;
  int epochs = 10;
  int batch_size = 32;
  std::uint64_t seed = 0;
  std::vector<int> hidden{64, 64};
  SolverConfig solver{};
  Truncation truncation = Truncation::kKeepNMinusK;
  // Re-check the projection's feasibility at every LML step (slow; for tests).
  bool check_feasibility = false;

  void validate() const;
};

struct EpochMetrics {
  int epoch = 0;
  double loss = 0.0;            // mean per-sample loss after the epoch's updates
  double gt_recall = 0.0;
  double obs_recall = 0.0;
  double zero_one_error = 0.0;  // against the ground-truth sets
  double mean_prob = 0.0;       // mean output probability over all labels
};

struct TrainReport {
  std::vector<EpochMetrics> epochs;
  std::string initial_digest;
  std::string final_digest;
  MlpModel model;
};

class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Loss of one sample under `kind`; `probs` receives the model's output
/// probabilities (LML projection, sigmoid or softmax depending on the loss).
LossValue sample_loss(LossKind kind, std::span<const double> scores,
                      const Sample& sample, int k, const TrainConfig& cfg,
                      std::vector<double>* probs = nullptr);

/// Minibatch SGD on the task, metrics recomputed over the whole task after
/// every epoch. Deterministic for a given (task, cfg).
TrainReport train_loop(const SyntheticTask& task, const TrainConfig& cfg);

/// One row per epoch: epoch,loss,gt_recall,obs_recall,zero_one_error
std::string report_csv(const TrainReport& report);
nlohmann::json report_json(const TrainReport& report);

}  // namespace lml
