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

#include "painseq/models/train_config.hpp"

#include <cmath>

#include "painseq/errors.hpp"

namespace painseq::models {

std::string_view to_string(EarlyStopMetric m) {
  return m == EarlyStopMetric::kValLoss ? "val_loss" : "val_accuracy";
}

std::string_view to_string(Precision p) { return p == Precision::kF32 ? "f32" : "f64"; }

std::string_view to_string(nn::ClassWeightMode m) {
  return m == nn::ClassWeightMode::kInverseFrequency ? "inverse_frequency" : "uniform";
}

void TrainConfig::validate() const {
  if (batch_size == 0) throw ConfigError("batch_size must be >= 1");
  if (max_epochs == 0) throw ConfigError("max_epochs must be >= 1");
  if (patience == 0) throw ConfigError("patience must be >= 1");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("dropout must lie in [0, 1)");
  if (!(lr >= 0.0) || !std::isfinite(lr)) throw ConfigError("lr must be finite and >= 0");
  if (!(rho > 0.0 && rho < 1.0)) throw ConfigError("rho must lie in (0, 1)");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
}

TrainConfig TrainConfig::from_key_value(const io::KeyValueConfig& kv) {
  kv.reject_unknown({"batch_size", "max_epochs", "patience", "lr", "rho", "epsilon", "dropout",
                     "seed", "class_weight_mode", "early_stop_metric", "ann_wide_first",
                     "precision"});
  TrainConfig c;
  c.batch_size = kv.get_uint("batch_size", c.batch_size);
  c.max_epochs = kv.get_uint("max_epochs", c.max_epochs);
  c.patience = kv.get_uint("patience", c.patience);
  c.lr = kv.get_double("lr", c.lr);
  c.rho = kv.get_double("rho", c.rho);
  c.epsilon = kv.get_double("epsilon", c.epsilon);
  c.dropout = kv.get_double("dropout", c.dropout);
  c.seed = kv.get_uint("seed", c.seed);
  c.ann_wide_first = kv.get_bool("ann_wide_first", c.ann_wide_first);

  const auto mode = kv.get_string("class_weight_mode", "inverse_frequency");
  if (mode == "inverse_frequency") {
    c.class_weight_mode = nn::ClassWeightMode::kInverseFrequency;
  } else if (mode == "uniform") {
    c.class_weight_mode = nn::ClassWeightMode::kUniform;
  } else {
    kv.fail("class_weight_mode", "expected inverse_frequency or uniform, got '" + mode + "'");
  }
  const auto metric = kv.get_string("early_stop_metric", "val_loss");
  if (metric == "val_loss") {
    c.early_stop_metric = EarlyStopMetric::kValLoss;
  } else if (metric == "val_accuracy") {
    c.early_stop_metric = EarlyStopMetric::kValAccuracy;
  } else {
    kv.fail("early_stop_metric", "expected val_loss or val_accuracy, got '" + metric + "'");
  }
  const auto precision = kv.get_string("precision", "f32");
  if (precision == "f32") {
    c.precision = Precision::kF32;
  } else if (precision == "f64") {
    c.precision = Precision::kF64;
  } else {
    kv.fail("precision", "expected f32 or f64, got '" + precision + "'");
  }
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(kv.source() + ": " + e.what());
  }
  return c;
}

}  // namespace painseq::models
