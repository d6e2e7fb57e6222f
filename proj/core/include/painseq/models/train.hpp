// Copyright 2026 The PainSeq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "painseq/errors.hpp"
#include "painseq/log.hpp"
#include "painseq/models/early_stopping.hpp"
#include "painseq/models/history.hpp"
#include "painseq/models/train_config.hpp"
#include "painseq/models/train_set.hpp"
#include "painseq/nn/adadelta.hpp"
#include "painseq/nn/init.hpp"
#include "painseq/nn/loss.hpp"

namespace painseq::models {

struct Validation {
  double loss = 0.0;
  double accuracy = 0.0;
};

template <class Model>
using Validator = std::function<Validation(const Model&)>;

template <class Model>
struct TrainResult {
  TrainHistory history;
  // Optimizer state as of the best epoch.
  nn::Adadelta<typename Model::value_type> optimizer;
};

// Class weights for the training units under `mode`.
template <typename T>
nn::ClassWeights training_class_weights(const TrainSet<T>& set, nn::ClassWeightMode mode) {
  std::array<std::size_t, kNumClasses> counts{};
  for (int y : set.labels) counts[static_cast<std::size_t>(label_from_index(y))]++;
  if (mode == nn::ClassWeightMode::kUniform) return nn::ClassWeights::uniform();
  return nn::class_weights_from_counts(counts);
}

// Mini-batch Adadelta with seeded shuffling and early stopping. On return
// `model` holds the parameters of the best epoch.
template <class Model>
TrainResult<Model> train(Model& model, const TrainSet<typename Model::value_type>& train_set,
                         const Validator<Model>& validate, const TrainConfig& config,
                         const std::function<void(const EpochRecord&)>& on_epoch = {}) {
  using T = typename Model::value_type;
  config.validate();
  if (train_set.size() == 0) throw InvalidInputError("training set is empty");
  const nn::ClassWeights weights = training_class_weights(train_set, config.class_weight_mode);

  nn::Rng rng(config.seed);
  nn::Adadelta<T> optimizer(config.adadelta());
  EarlyStopping stopper(config.early_stop_metric, config.patience);
  TrainResult<Model> result{{}, optimizer};
  Model best = model;

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    std::size_t loss_units = 0;
    for (std::size_t start = 0, batch = 1; start < order.size();
         start += config.batch_size, ++batch) {
      const std::size_t n = std::min(config.batch_size, order.size() - start);
      const std::span<const std::size_t> idx(order.data() + start, n);
      const auto x = train_set.gather(idx);
      const auto y = train_set.gather_labels(idx);
      double loss = 0.0;
      try {
        loss = model.loss_and_grads(x, y, weights, rng);
      } catch (const DegenerateBatchError& e) {
        logger()->warn("epoch {} batch {}: skipped ({})", epoch, batch, e.what());
        continue;
      }
      if (!std::isfinite(loss)) {
        throw TrainingError("non-finite training loss at epoch " + std::to_string(epoch) +
                            ", batch " + std::to_string(batch) + " (" + std::to_string(n) +
                            " units)");
      }
      try {
        const auto params = model.parameters();
        optimizer.step(params);
      } catch (const NonFiniteError& e) {
        throw TrainingError("epoch " + std::to_string(epoch) + ", batch " +
                            std::to_string(batch) + ": " + e.what());
      }
      loss_sum += loss * static_cast<double>(n);
      loss_units += n;
    }

    const Validation v = validate(model);
    EpochRecord record{epoch, loss_units == 0 ? 0.0 : loss_sum / static_cast<double>(loss_units),
                       v.loss, v.accuracy};
    result.history.epochs.push_back(record);
    logger()->info("epoch {:3d}  train_loss {:.5f}  val_loss {:.5f}  val_accuracy {:.4f}", epoch,
                   record.train_loss, record.val_loss, record.val_accuracy);
    if (on_epoch) on_epoch(record);

    const double metric =
        config.early_stop_metric == EarlyStopMetric::kValLoss ? v.loss : v.accuracy;
    if (stopper.update(metric)) {
      best = model;
      result.optimizer = optimizer;
    }
    if (stopper.should_stop()) {
      result.history.stop_reason = StopReason::kEarlyStop;
      break;
    }
  }
  if (stopper.best_epoch() == 0) {
    throw TrainingError("validation metric was NaN in every epoch");
  }
  result.history.best_epoch = stopper.best_epoch();
  model = std::move(best);
  return result;
}

}  // namespace painseq::models
