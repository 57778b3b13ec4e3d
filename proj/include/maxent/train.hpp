/* Copyright 2026 The maxent-ig Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "maxent/data.hpp"
#include "maxent/nn.hpp"

namespace maxent {

enum class Optimizer { kSgd, kAdam };

struct TrainConfig {
  std::size_t epochs = 20;
  std::size_t batch_size = 32;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  Optimizer optimizer = Optimizer::kAdam;
  double weight_decay = 0.0;
};

struct TrainReport {
  Network network;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  std::vector<double> epoch_loss;
};

inline double accuracy(const Network& net, const LabeledDataset& ds,
                       const std::vector<std::size_t>& indices) {
  if (indices.empty()) return 0.0;
  std::size_t hit = 0;
  for (std::size_t i : indices) hit += predict(net, ds.instances[i]) == ds.labels[i];
  return static_cast<double>(hit) / static_cast<double>(indices.size());
}

// Softmax cross-entropy; writes dLoss/dlogits into grad.
inline double cross_entropy(std::span<const double> logits, std::size_t label,
                            std::span<double> grad) {
  double m = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (double l : logits) z += std::exp(l - m);
  for (std::size_t i = 0; i < logits.size(); ++i) {
    grad[i] = std::exp(logits[i] - m) / z - (i == label ? 1.0 : 0.0);
  }
  return -(logits[label] - m - std::log(z));
}

// Mini-batch training on ds.train_indices. The returned network is a copy;
// the argument is left untouched.
inline TrainReport train(const Network& init, const LabeledDataset& ds,
                         const TrainConfig& cfg) {
  if (!(cfg.learning_rate > 0.0)) throw SpecError("learning_rate must be positive");
  if (cfg.batch_size < 1) throw SpecError("batch_size must be at least 1");
  if (ds.train_indices.empty()) throw DataError("training split is empty");
  for (std::size_t l : ds.labels) {
    if (l >= init.class_count()) throw DataError("label exceeds network class count");
  }

  TrainReport report{init, 0.0, 0.0, {}};
  Network& net = report.network;
  std::mt19937_64 rng(cfg.seed);
  std::vector<std::size_t> order = ds.train_indices;
  auto params = net.parameters();
  ParamGrads m1 = net.zero_grads(), m2 = net.zero_grads();
  std::size_t step = 0;
  std::vector<double> dlogits(net.class_count());

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      std::size_t end = std::min(order.size(), start + cfg.batch_size);
      ParamGrads grads = net.zero_grads();
      for (std::size_t b = start; b < end; ++b) {
        std::size_t i = order[b];
        auto t = net.trace(ds.instances[i]);
        loss_sum += cross_entropy(t.acts.back(), ds.labels[i], dlogits);
        net.backward(t, dlogits, BackpropRule::kPlain, &grads);
      }
      const double inv = 1.0 / static_cast<double>(end - start);
      ++step;
      for (std::size_t p = 0; p < params.size(); ++p) {
        auto& g = grads[p];
        for (std::size_t j = 0; j < g.size(); ++j) {
          double gj = g[j] * inv + cfg.weight_decay * params[p][j];
          if (cfg.optimizer == Optimizer::kSgd) {
            params[p][j] -= cfg.learning_rate * gj;
          } else {
            constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
            m1[p][j] = b1 * m1[p][j] + (1 - b1) * gj;
            m2[p][j] = b2 * m2[p][j] + (1 - b2) * gj * gj;
            double mh = m1[p][j] / (1 - std::pow(b1, static_cast<double>(step)));
            double vh = m2[p][j] / (1 - std::pow(b2, static_cast<double>(step)));
            params[p][j] -= cfg.learning_rate * mh / (std::sqrt(vh) + eps);
          }
        }
      }
    }
    double mean_loss = loss_sum / static_cast<double>(order.size());
    if (!std::isfinite(mean_loss)) {
      throw NumericError("training diverged at epoch " + std::to_string(epoch));
    }
    report.epoch_loss.push_back(mean_loss);
  }
  report.train_accuracy = accuracy(net, ds, ds.train_indices);
  report.test_accuracy = accuracy(net, ds, ds.test_indices);
  return report;
}

}  // namespace maxent
