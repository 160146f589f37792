// SPDX-License-Identifier: Apache-2.0
#include "scampsim/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "scampsim/error.hpp"

namespace scampsim {
namespace {

double score_scale(const BnnModel& m) { return 1.0 / static_cast<double>(m.features_per_class()); }

std::vector<double> softmax(std::span<const std::int64_t> scores, double scale) {
  std::vector<double> p(scores.size());
  double hi = -INFINITY;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    p[i] = static_cast<double>(scores[i]) * scale;
    hi = std::max(hi, p[i]);
  }
  double z = 0.0;
  for (auto& v : p) {
    v = std::exp(v - hi);
    z += v;
  }
  for (auto& v : p) v /= z;
  return p;
}

}  // namespace

TrainConfig TrainConfig::from_json(const nlohmann::json& doc) {
  TrainConfig c;
  try {
    c.seed = doc.value("seed", c.seed);
    c.learning_rate = doc.value("lr", c.learning_rate);
    c.epochs = doc.value("epochs", c.epochs);
    c.batch_size = doc.value("batch_size", c.batch_size);
    c.init_scale = doc.value("init_scale", c.init_scale);
    c.k = doc.value("k", c.k);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::config, std::string("training config: ") + e.what());
  }
  if (c.epochs < 0 || c.batch_size < 1 || c.learning_rate < 0 || c.init_scale < 0) {
    throw Error(ErrorKind::config, "training config: epochs/batch_size/lr/init_scale out of range");
  }
  return c;
}

nlohmann::json TrainConfig::to_json() const {
  return {{"seed", seed},      {"lr", learning_rate},     {"epochs", epochs},
          {"batch_size", batch_size}, {"init_scale", init_scale}, {"k", k}};
}

LatentModel LatentModel::init(std::uint64_t seed, double scale, int k,
                              std::vector<std::string> class_names, PlaneGeometry geometry) {
  LatentModel m;
  m.geometry = geometry;
  m.k = k;
  m.class_names = std::move(class_names);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  m.kernels.assign(static_cast<std::size_t>(geometry.num_blocks()),
                   std::vector<double>(static_cast<std::size_t>(k * k)));
  for (auto& kern : m.kernels) {
    for (auto& w : kern) w = u(rng);
  }
  const std::size_t ps = static_cast<std::size_t>(geometry.block_size / 2);
  m.fc.assign(m.class_names.size(),
              std::vector<double>(static_cast<std::size_t>(geometry.num_blocks()) * ps * ps));
  for (auto& row : m.fc) {
    for (auto& w : row) w = u(rng);
  }
  return m;
}

BnnModel LatentModel::binarize() const {
  BnnModel m;
  m.geometry = geometry;
  m.k = k;
  m.class_names = class_names;
  auto sign = [](double v) -> std::int8_t { return v >= 0.0 ? 1 : -1; };
  for (const auto& kern : kernels) {
    std::vector<std::int8_t> out(kern.size());
    std::transform(kern.begin(), kern.end(), out.begin(), sign);
    m.kernels.push_back(std::move(out));
  }
  for (const auto& row : fc) {
    std::vector<std::int8_t> out(row.size());
    std::transform(row.begin(), row.end(), out.begin(), sign);
    m.fc.push_back(std::move(out));
  }
  m.validate();
  return m;
}

double score_loss(std::span<const std::int64_t> scores, int label, double scale) {
  const auto p = softmax(scores, scale);
  return -std::log(std::max(p[static_cast<std::size_t>(label)], 1e-300));
}

Gradients compute_gradients(const BnnModel& model, std::span<const GestureSample> batch) {
  const int nb = model.num_blocks();
  const int bs = model.geometry.block_size;
  const int ps = model.pooled_side();
  const int k = model.k;
  const int nc = model.num_classes();
  const double scale = score_scale(model);

  Gradients g;
  g.kernels.assign(static_cast<std::size_t>(nb), std::vector<double>(static_cast<std::size_t>(k * k), 0.0));
  g.fc.assign(static_cast<std::size_t>(nc), std::vector<double>(model.features_per_class(), 0.0));
  if (batch.empty()) return g;

  std::vector<double> dscore(static_cast<std::size_t>(nc));
  InferenceTrace trace;
  for (const auto& sample : batch) {
    const ClassScores scores = reference_infer(model, sample.image, &trace);
    const auto p = softmax(scores.scores, scale);
    g.loss -= std::log(std::max(p[static_cast<std::size_t>(sample.label)], 1e-300));
    if (scores.predicted == sample.label) ++g.correct;
    for (int c = 0; c < nc; ++c) {
      dscore[static_cast<std::size_t>(c)] =
          (p[static_cast<std::size_t>(c)] - (c == sample.label ? 1.0 : 0.0)) * scale;
    }
    for (int c = 0; c < nc; ++c) {
      const double d = dscore[static_cast<std::size_t>(c)];
      auto& row = g.fc[static_cast<std::size_t>(c)];
      for (std::size_t e = 0; e < row.size(); ++e) {
        row[e] += d * static_cast<double>(trace.pooled.values[e]);
      }
    }
    const auto& input = sample.image;
    for (int b = 0; b < nb; ++b) {
      auto& gk = g.kernels[static_cast<std::size_t>(b)];
      for (int i = 0; i < ps; ++i) {
        for (int j = 0; j < ps; ++j) {
          if (trace.pooled.at(b, i, j) <= 0) continue;  // ReLU blocks the gradient
          const std::size_t e = (static_cast<std::size_t>(b) * ps + i) * ps + j;
          double dpool = 0.0;
          for (int c = 0; c < nc; ++c) {
            dpool += dscore[static_cast<std::size_t>(c)] * model.fc[static_cast<std::size_t>(c)][e];
          }
          // Route to the first maximum of the cell.
          int rr = 2 * i;
          int cc = 2 * j;
          const std::int64_t target = trace.pooled.at(b, i, j);
          for (int di = 0; di < 2; ++di) {
            for (int dj = 0; dj < 2; ++dj) {
              if (trace.relu.at(b, 2 * i + di, 2 * j + dj) == target) {
                rr = 2 * i + di;
                cc = 2 * j + dj;
                di = 2;
                break;
              }
            }
          }
          for (int dy = 0; dy < k; ++dy) {
            for (int dx = 0; dx < k; ++dx) {
              if (rr + dy < bs && cc + dx < bs && input.at(rr + dy, cc + dx)) {
                gk[static_cast<std::size_t>(dy * k + dx)] += dpool;
              }
            }
          }
        }
      }
    }
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  g.loss *= inv;
  for (auto& v : g.kernels) {
    for (auto& x : v) x *= inv;
  }
  for (auto& v : g.fc) {
    for (auto& x : v) x *= inv;
  }
  return g;
}

void sgd_step(LatentModel& latent, const Gradients& grads, double learning_rate) {
  auto update = [learning_rate](std::vector<std::vector<double>>& w,
                                const std::vector<std::vector<double>>& d) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      for (std::size_t j = 0; j < w[i].size(); ++j) {
        w[i][j] = std::clamp(w[i][j] - learning_rate * d[i][j], -1.0, 1.0);
      }
    }
  };
  update(latent.kernels, grads.kernels);
  update(latent.fc, grads.fc);
}

double mean_loss(const BnnModel& model, std::span<const GestureSample> samples) {
  if (samples.empty()) return 0.0;
  double total = 0.0;
  for (const auto& s : samples) {
    total += score_loss(reference_infer(model, s.image).scores, s.label, score_scale(model));
  }
  return total / static_cast<double>(samples.size());
}

Evaluation evaluate(const BnnModel& model, std::span<const GestureSample> samples) {
  Evaluation ev;
  const auto nc = static_cast<std::size_t>(model.num_classes());
  ev.confusion.assign(nc, std::vector<std::size_t>(nc, 0));
  for (const auto& s : samples) {
    const int pred = reference_infer(model, s.image).predicted;
    ++ev.confusion[static_cast<std::size_t>(s.label)][static_cast<std::size_t>(pred)];
    ev.correct += pred == s.label ? 1 : 0;
    ++ev.total;
  }
  return ev;
}

std::string TrainResult::log_csv() const {
  std::ostringstream os;
  os.precision(6);
  os << std::fixed << "epoch,train_acc,test_acc,loss\n";
  for (const auto& e : log) {
    os << e.epoch << ',' << e.train_accuracy << ',' << e.test_accuracy << ',' << e.loss << '\n';
  }
  return os.str();
}

TrainResult train(const DatasetSplit& data, const TrainConfig& config) {
  if (data.train.empty()) throw Error(ErrorKind::dataset, "training set is empty");
  LatentModel latent =
      LatentModel::init(config.seed, config.init_scale, config.k, data.class_names);
  TrainResult result;
  result.model = latent.binarize();
  // Snapshots are ranked by test accuracy, or by train accuracy when there
  // is no test split.
  const bool by_train = data.test.empty();
  double best = evaluate(result.model, by_train ? data.train : data.test).accuracy();

  std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::size_t> order(data.train.size());
  std::vector<GestureSample> batch;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      batch.clear();
      for (std::size_t i = start; i < stop; ++i) batch.push_back(data.train[order[i]]);
      const Gradients g = compute_gradients(latent.binarize(), batch);
      loss_sum += g.loss * static_cast<double>(batch.size());
      correct += g.correct;
      sgd_step(latent, g, config.learning_rate);
    }
    const BnnModel snapshot = latent.binarize();
    EpochLog entry;
    entry.epoch = epoch;
    entry.train_accuracy = static_cast<double>(correct) / static_cast<double>(order.size());
    entry.test_accuracy = evaluate(snapshot, data.test).accuracy();
    entry.loss = loss_sum / static_cast<double>(order.size());
    result.log.push_back(entry);
    const double score =
        by_train ? evaluate(snapshot, data.train).accuracy() : entry.test_accuracy;
    if (score > best) {
      best = score;
      result.model = snapshot;
      result.best_epoch = epoch;
    }
  }
  return result;
}

}  // namespace scampsim
