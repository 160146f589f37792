// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scampsim/bnn_model.hpp"
#include "scampsim/gesture_data.hpp"

namespace scampsim {

struct TrainConfig {
  std::uint64_t seed = 1;
  double learning_rate = 40.0;
  int epochs = 12;
  int batch_size = 16;
  /// Latents start uniform in [-init_scale, init_scale].
  double init_scale = 0.05;
  int k = 4;

  static TrainConfig from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;
};

/// Real-valued shadow weights; sign(latent) with sign(0) = +1 gives the
/// deployed {-1,+1} weights.
struct LatentModel {
  PlaneGeometry geometry{};
  int k = 4;
  std::vector<std::string> class_names = kGestureClasses;
  std::vector<std::vector<double>> kernels;
  std::vector<std::vector<double>> fc;

  static LatentModel init(std::uint64_t seed, double scale, int k = 4,
                          std::vector<std::string> class_names = kGestureClasses,
                          PlaneGeometry geometry = {});
  BnnModel binarize() const;
};

/// Straight-through gradients of the mean softmax cross-entropy, with class
/// scores scaled by 1 / (blocks * pooled_side^2), accumulated over a batch in
/// sample order.
struct Gradients {
  std::vector<std::vector<double>> kernels;
  std::vector<std::vector<double>> fc;
  double loss = 0.0;  // mean over the batch
  std::size_t correct = 0;
};

Gradients compute_gradients(const BnnModel& binarized, std::span<const GestureSample> batch);

/// latent -= lr * grad, then clip to [-1, 1].
void sgd_step(LatentModel& latent, const Gradients& grads, double learning_rate);

/// Mean cross-entropy of the binarized model on a set of samples.
double mean_loss(const BnnModel& model, std::span<const GestureSample> samples);

/// Cross-entropy for one sample given raw integer scores.
double score_loss(std::span<const std::int64_t> scores, int label, double scale);

struct EpochLog {
  int epoch = 0;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  double loss = 0.0;
};

struct TrainResult {
  BnnModel model;
  std::vector<EpochLog> log;
  int best_epoch = 0;
  /// CSV: epoch,train_acc,test_acc,loss
  std::string log_csv() const;
};

/// SGD over shuffled minibatches for a fixed number of epochs; returns the
/// binarized snapshot with the best test accuracy (earliest on ties; the
/// initial model counts as epoch 0).
TrainResult train(const DatasetSplit& data, const TrainConfig& config);

struct Evaluation {
  std::size_t correct = 0;
  std::size_t total = 0;
  /// confusion[true][predicted]
  std::vector<std::vector<std::size_t>> confusion;
  double accuracy() const { return total ? static_cast<double>(correct) / total : 0.0; }
};

Evaluation evaluate(const BnnModel& model, std::span<const GestureSample> samples);

}  // namespace scampsim
