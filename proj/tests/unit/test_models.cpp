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

#include <doctest.h>

#include "helpers.hpp"
#include "painseq/errors.hpp"
#include "painseq/models/early_stopping.hpp"
#include "painseq/models/history.hpp"
#include "painseq/models/lstm_model.hpp"
#include "painseq/models/simple_ann.hpp"
#include "painseq/models/train.hpp"
#include "painseq/models/train_config.hpp"
#include "painseq/models/train_set.hpp"
#include "painseq/models/validation.hpp"
#include "painseq/nn/gradcheck.hpp"

using namespace painseq;
using namespace painseq::models;
using nn::Tensor;
using testing::random_tensor;

namespace {

AnnArchitecture small_ann() {
  AnnArchitecture a;
  a.input_dim = 6;
  a.hidden = {5};
  return a;
}

// Three well separated Gaussian blobs, `per_class` units each, in `dim` features.
TrainSet<double> blob_set(std::size_t per_class, std::size_t dim, std::uint64_t seed) {
  TrainSet<double> s;
  s.inputs = random_tensor({3 * per_class, dim}, seed, 0.3);
  for (std::size_t i = 0; i < 3 * per_class; ++i) {
    const int label = static_cast<int>(i % 3);
    s.inputs[i * dim + static_cast<std::size_t>(label)] += 2.0;
    s.labels.push_back(label);
  }
  return s;
}

std::vector<data::LabeledSequence> blob_videos(std::size_t per_class, std::size_t frames,
                                               std::size_t dim, std::uint64_t seed) {
  std::vector<data::LabeledSequence> out;
  nn::Rng rng(seed);
  std::normal_distribution<double> n(0.0, 0.3);
  for (std::size_t v = 0; v < 3 * per_class; ++v) {
    const auto label = static_cast<Label>(v % 3);
    data::FeatureSequence f(frames, dim, 30.0, io::DType::kF64);
    for (std::size_t t = 0; t < frames; ++t) {
      for (std::size_t d = 0; d < dim; ++d) {
        f.set(t, d, n(rng) + (d == static_cast<std::size_t>(to_index(label)) ? 2.0 : 0.0));
      }
    }
    out.push_back({"v" + std::to_string(v), "P1", label, std::move(f)});
  }
  return out;
}

TrainConfig quick_config(std::size_t max_epochs) {
  TrainConfig c;
  c.max_epochs = max_epochs;
  c.batch_size = 8;
  c.seed = 11;
  return c;
}

// A validator that ignores the model and replays a script.
template <class Model>
Validator<Model> scripted(std::vector<double> losses) {
  auto pos = std::make_shared<std::size_t>(0);
  return [losses = std::move(losses), pos](const Model&) {
    const double v = losses.at(std::min(*pos, losses.size() - 1));
    ++*pos;
    return Validation{v, 0.5};
  };
}

std::vector<std::byte> bytes_of(const io::Checkpoint& c) { return io::encode_checkpoint(c); }

}  // namespace

TEST_CASE("simple ann topology") {
  const auto arch = AnnArchitecture::standard();
  // Three trainable maps behind the 1024-wide input.
  constexpr std::size_t kExpected = 1024 * 128 + 128 + 128 * 32 + 32 + 32 * 3 + 3;
  static_assert(kExpected == 135427);
  CHECK(arch.parameter_count() == kExpected);
  const auto ann = SimpleAnn<float>::build(arch, 1);
  CHECK(ann.parameter_count() == kExpected);
  REQUIRE(ann.layers().size() == 3);
  CHECK(ann.layers()[0].weight.shape() == nn::Shape{1024, 128});
  CHECK(ann.layers()[1].weight.shape() == nn::Shape{128, 32});
  CHECK(ann.layers()[2].weight.shape() == nn::Shape{32, 3});
  CHECK(ann.layers()[2].activation == nn::Activation::kSoftmax);

  const auto wide = AnnArchitecture::standard(true);
  CHECK(wide.parameter_count() == 1024 * 1024 + 1024 + kExpected);
  CHECK(SimpleAnn<float>::build(wide, 1).layers().size() == 4);

  CHECK(bytes_of(SimpleAnn<float>::build(arch, 5).to_checkpoint()) ==
        bytes_of(SimpleAnn<float>::build(arch, 5).to_checkpoint()));
  CHECK(bytes_of(SimpleAnn<float>::build(arch, 5).to_checkpoint()) !=
        bytes_of(SimpleAnn<float>::build(arch, 6).to_checkpoint()));

  const auto p = ann.predict_batch(nn::tensor_cast<float>(random_tensor({1, 1024}, 2)));
  CHECK(p.shape() == nn::Shape{1, 3});
  CHECK(std::abs(p[0] + p[1] + p[2] - 1.0f) < 1e-6f);
}

TEST_CASE("simple ann frame predictions") {
  const auto zero = SimpleAnn<double>::zeros(AnnArchitecture::standard());
  data::FeatureSequence seq(300, 1024, 30.0, io::DType::kF64);
  const auto rows = zero.predict_frames(seq);
  CHECK(rows.shape() == nn::Shape{300, 3});
  for (double v : rows.vector()) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  const auto ann = SimpleAnn<double>::build(small_ann(), 3);
  data::FeatureSequence two(2, 6, 30.0, io::DType::kF64);
  for (std::size_t d = 0; d < 6; ++d) {
    two.set(0, d, 0.1 * static_cast<double>(d));
    two.set(1, d, 0.1 * static_cast<double>(d));
  }
  const auto dup = ann.predict_frames(two);
  for (std::size_t k = 0; k < 3; ++k) CHECK(dup.at(0, k) == dup.at(1, k));
  CHECK_THROWS_AS(ann.predict_frames(data::FeatureSequence(2, 7, 30.0)), DimensionError);
}

TEST_CASE("simple ann checkpoint round trip") {
  const auto ann = SimpleAnn<float>::build(AnnArchitecture::standard(true), 9);
  const auto ckpt = ann.to_checkpoint();
  CHECK(is_ann_checkpoint(ckpt));
  CHECK_FALSE(is_lstm_checkpoint(ckpt));
  const auto back = SimpleAnn<float>::from_checkpoint(ckpt);
  CHECK(back.layers().size() == 4);
  CHECK(bytes_of(back.to_checkpoint()) == bytes_of(ckpt));
  CHECK(back.architecture().dropout == ann.architecture().dropout);
}

TEST_CASE("simple ann gradients agree with finite differences") {
  auto arch = small_ann();
  arch.hidden = {5, 4};
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto ann = SimpleAnn<double>::build(arch, seed);
    // Zero biases put rows that dropout silenced exactly on the relu kink.
    for (auto& l : ann.layers()) l.bias = random_tensor(l.bias.shape(), 200 + seed, 0.1);
    const auto x = random_tensor({7, 6}, 100 + seed);
    const std::vector<int> y{0, 1, 2, 2, 1, 0, 2};
    nn::ClassWeights w;
    w.weight = {1.5, 0.75, 0.75};
    auto run = [&] {
      nn::Rng rng(seed);
      return ann.loss_and_grads(x, y, w, rng);
    };
    const auto params = ann.parameters();
    const auto report = nn::grad_check(params, run, [&] { run(); });
    CHECK(report.max_rel_error() < 1e-6);
  }
}

TEST_CASE("lstm model topology") {
  const LstmArchitecture arch;
  const auto m = LstmModel<float>::build(arch, 1);
  CHECK(m.lstm1.w_input.shape() == nn::Shape{1024, 128});
  CHECK(m.lstm1.w_recurrent.shape() == nn::Shape{32, 128});
  CHECK(m.lstm1.bias.shape() == nn::Shape{128});
  CHECK(m.lstm2.w_input.shape() == nn::Shape{32, 64});
  CHECK(m.fc1.weight.shape() == nn::Shape{16, 16});
  CHECK(m.fc2.weight.shape() == nn::Shape{16, 3});
  CHECK(m.bn_input.features() == 1024);
  CHECK(m.bn1.features() == 32);
  CHECK(m.bn2.features() == 16);
  CHECK(m.parameter_count() == arch.parameter_count());
  CHECK(arch.parameter_count() == 2 * 1024 + (1024 + 32 + 1) * 128 + 2 * 32 +
                                      (32 + 16 + 1) * 64 + 2 * 16 + 16 * 16 + 16 + 16 * 3 + 3);

  CHECK(bytes_of(LstmModel<float>::build(arch, 4).to_checkpoint()) ==
        bytes_of(LstmModel<float>::build(arch, 4).to_checkpoint()));

  const auto p = m.predict_batch(nn::tensor_cast<float>(random_tensor({2, 300, 1024}, 3)));
  CHECK(p.shape() == nn::Shape{2, 3});
  for (std::size_t r = 0; r < 2; ++r) {
    CHECK(std::abs(p.at(r, 0) + p.at(r, 1) + p.at(r, 2) - 1.0f) < 1e-6f);
  }
}

TEST_CASE("lstm model sequence prediction") {
  const auto arch = LstmArchitecture::scaled_down();
  const auto m = LstmModel<double>::build(arch, 2);
  data::FeatureSequence seq(arch.seq_len, arch.input_dim, 30.0, io::DType::kF64);
  for (std::size_t t = 0; t < arch.seq_len; ++t) {
    for (std::size_t d = 0; d < arch.input_dim; ++d) seq.set(t, d, std::sin(double(t * 7 + d)));
  }
  const auto a = m.predict_sequence(seq);
  CHECK(a.shape() == nn::Shape{3});
  CHECK(std::abs(a[0] + a[1] + a[2] - 1.0) < 1e-6);
  CHECK(m.predict_sequence(seq) == a);
  CHECK_THROWS_AS(m.predict_sequence(seq.slice(0, arch.seq_len - 1)), ShortVideoError);
  CHECK_THROWS_AS(
      m.predict_sequence(data::FeatureSequence(arch.seq_len, arch.input_dim + 1, 30.0)),
      DimensionError);

  const LstmArchitecture full;
  const auto big = LstmModel<float>::build(full, 1);
  CHECK_THROWS_AS(big.predict_sequence(data::FeatureSequence(299, 1024, 30.0)), ShortVideoError);
}

TEST_CASE("lstm model checkpoint round trip keeps running statistics") {
  const auto arch = LstmArchitecture::scaled_down();
  auto m = LstmModel<double>::build(arch, 3);
  nn::Rng rng(1);
  m.loss_and_grads(random_tensor({4, arch.seq_len, arch.input_dim}, 4), std::vector<int>{0, 1, 2, 0},
                   nn::ClassWeights::uniform(), rng);
  const auto ckpt = m.to_checkpoint();
  CHECK(is_lstm_checkpoint(ckpt));
  CHECK_FALSE(is_ann_checkpoint(ckpt));
  const auto back = LstmModel<double>::from_checkpoint(ckpt);
  CHECK(back.bn1.running_mean == m.bn1.running_mean);
  CHECK(back.bn_input.running_var == m.bn_input.running_var);
  CHECK(bytes_of(back.to_checkpoint()) == bytes_of(ckpt));

  auto broken = ckpt;
  std::erase_if(broken.entries, [](const auto& e) { return e.name == "lstm2.w_recurrent"; });
  CHECK_THROWS_AS(LstmModel<double>::from_checkpoint(broken), TopologyError);
}

TEST_CASE("lstm model gradients agree with finite differences") {
  const auto arch = LstmArchitecture::scaled_down();
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    auto m = LstmModel<double>::build(arch, seed);
    const auto x = random_tensor({4, arch.seq_len, arch.input_dim}, 50 + seed);
    const std::vector<int> y{2, 0, 1, 2};
    nn::ClassWeights w;
    w.weight = {0.8, 1.2, 1.0};
    // A fixed dropout stream makes the masks part of the function.
    auto run = [&] {
      nn::Rng rng(seed);
      return m.loss_and_grads(x, y, w, rng);
    };
    const auto params = m.parameters();
    const auto report = nn::grad_check(params, run, [&] { run(); });
    CHECK(report.max_rel_error() < 1e-4);
  }
  auto m = LstmModel<double>::build(arch, 0);
  nn::Rng rng(0);
  CHECK_THROWS_AS(m.loss_and_grads(random_tensor({1, arch.seq_len, arch.input_dim}, 1),
                                   std::vector<int>{1}, nn::ClassWeights::uniform(), rng),
                  DegenerateBatchError);
}

TEST_CASE("inference does not mutate the model") {
  const auto arch = LstmArchitecture::scaled_down();
  const auto m = LstmModel<double>::build(arch, 5);
  const auto before = bytes_of(m.to_checkpoint());
  data::FeatureSequence seq(arch.seq_len, arch.input_dim, 30.0, io::DType::kF64);
  for (int i = 0; i < 3; ++i) m.predict_sequence(seq);
  CHECK(bytes_of(m.to_checkpoint()) == before);

  const auto ann = SimpleAnn<double>::build(small_ann(), 5);
  const auto ann_before = bytes_of(ann.to_checkpoint());
  for (int i = 0; i < 3; ++i) ann.predict_frames(data::FeatureSequence(10, 6, 30.0));
  CHECK(bytes_of(ann.to_checkpoint()) == ann_before);
}

TEST_CASE("train sets") {
  std::vector<data::LabeledSequence> units = blob_videos(1, 4, 3, 1);
  const auto frames = make_frame_set<double>(units);
  CHECK(frames.size() == 12);
  CHECK(frames.inputs.shape() == nn::Shape{12, 3});
  CHECK(frames.labels[4] == 1);
  CHECK(frames.inputs.at(5, 2) == units[1].features.at(1, 2));
  const auto seqs = make_sequence_set<double>(units, 4);
  CHECK(seqs.inputs.shape() == nn::Shape{3, 4, 3});
  const std::vector<std::size_t> idx{2, 0};
  const auto g = seqs.gather(idx);
  CHECK(g.shape() == nn::Shape{2, 4, 3});
  CHECK(g[0] == seqs.inputs[2 * 12]);
  CHECK(seqs.gather_labels(idx) == std::vector<int>{2, 0});
  CHECK_THROWS(make_sequence_set<double>(units, 5));
}

TEST_CASE("early stopping rule") {
  EarlyStopping s(EarlyStopMetric::kValLoss, 5);
  const std::vector<double> losses{1.0, 0.9, 0.91, 0.92, 0.93, 0.94, 0.95};
  std::size_t stopped_at = 0;
  for (std::size_t i = 0; i < losses.size() && stopped_at == 0; ++i) {
    s.update(losses[i]);
    if (s.should_stop()) stopped_at = i + 1;
  }
  CHECK(stopped_at == 7);
  CHECK(s.best_epoch() == 2);
  CHECK(s.best_value() == 0.9);

  EarlyStopping equal(EarlyStopMetric::kValLoss, 2);
  CHECK(equal.update(1.0));
  CHECK_FALSE(equal.update(1.0));  // ties do not count as improvement
  CHECK_FALSE(equal.update(1.0));
  CHECK(equal.should_stop());

  EarlyStopping acc(EarlyStopMetric::kValAccuracy, 1);
  CHECK(acc.update(0.5));
  CHECK(acc.update(0.6));
  CHECK_FALSE(acc.update(0.55));
  CHECK(acc.best_epoch() == 2);

  EarlyStopping nan(EarlyStopMetric::kValLoss, 3);
  CHECK_FALSE(nan.update(std::nan("")));
  CHECK(nan.best_epoch() == 0);
  CHECK(nan.update(2.0));
}

TEST_CASE("training honours the patience rule") {
  const auto set = blob_set(6, 6, 1);
  auto ann = SimpleAnn<double>::build(small_ann(), 1);
  const auto r = train(ann, set,
                       scripted<SimpleAnn<double>>({1.0, 0.9, 0.91, 0.92, 0.93, 0.94, 0.95, 0.1}),
                       quick_config(100));
  CHECK(r.history.epochs.size() == 7);
  CHECK(r.history.best_epoch == 2);
  CHECK(r.history.stop_reason == StopReason::kEarlyStop);

  std::vector<double> falling;
  for (int i = 0; i < 100; ++i) falling.push_back(10.0 - 0.05 * i);
  auto ann2 = SimpleAnn<double>::build(small_ann(), 1);
  const auto r2 = train(ann2, set, scripted<SimpleAnn<double>>(falling), quick_config(100));
  CHECK(r2.history.epochs.size() == 100);
  CHECK(r2.history.best_epoch == 100);
  CHECK(r2.history.stop_reason == StopReason::kMaxEpochs);
}

TEST_CASE("training restores the best epoch") {
  const auto videos = blob_videos(4, 6, 6, 3);
  const auto val = blob_videos(2, 6, 6, 4);
  const auto set = make_frame_set<double>(videos);
  auto ann = SimpleAnn<double>::build(small_ann(), 2);
  Validator<SimpleAnn<double>> v = [&](const SimpleAnn<double>& m) { return validate_ann(m, val); };
  auto cfg = quick_config(30);
  cfg.patience = 3;
  const auto r = train(ann, set, v, cfg);
  const auto again = validate_ann(ann, val);
  CHECK(again.loss == r.history.best().val_loss);
  CHECK(again.accuracy == r.history.best().val_accuracy);
  for (const auto& e : r.history.epochs) CHECK(e.val_loss >= r.history.best().val_loss);
}

TEST_CASE("training overfits a small separable set") {
  const auto set = blob_set(10, 6, 5);
  auto ann = SimpleAnn<double>::build(small_ann(), 4);
  std::vector<double> falling;
  for (int i = 0; i < 20; ++i) falling.push_back(1.0 - 0.01 * i);
  const auto r = train(ann, set, scripted<SimpleAnn<double>>(falling), quick_config(20));
  REQUIRE(r.history.epochs.size() == 20);
  CHECK(r.history.epochs[19].train_loss < r.history.epochs[0].train_loss);
}

TEST_CASE("training is deterministic") {
  const auto arch = LstmArchitecture::scaled_down();
  const auto train_units = blob_videos(4, arch.seq_len, arch.input_dim, 7);
  const auto val_units = blob_videos(2, arch.seq_len, arch.input_dim, 8);
  const auto set = make_sequence_set<double>(train_units, arch.seq_len);
  Validator<LstmModel<double>> v = [&](const LstmModel<double>& m) {
    return validate_lstm(m, val_units);
  };
  auto run = [&] {
    auto m = LstmModel<double>::build(arch, 1);
    auto r = train(m, set, v, quick_config(6));
    return std::make_pair(r.history, bytes_of(m.to_checkpoint()));
  };
  const auto a = run();
  const auto b = run();
  for (std::size_t i = 0; i < std::min(a.first.epochs.size(), b.first.epochs.size()); ++i) {
    INFO("epoch " << i + 1 << " " << a.first.epochs[i].train_loss << " " << b.first.epochs[i].train_loss
         << " " << a.first.epochs[i].val_loss << " " << b.first.epochs[i].val_loss);
    CHECK(a.first.epochs[i] == b.first.epochs[i]);
  }
  CHECK(a.first == b.first);
  CHECK(a.second == b.second);
}

TEST_CASE("training skips single-sequence batches and reports non-finite losses") {
  const auto arch = LstmArchitecture::scaled_down();
  const auto units = blob_videos(3, arch.seq_len, arch.input_dim, 9);  // 9 units
  const auto set = make_sequence_set<double>(units, arch.seq_len);
  auto m = LstmModel<double>::build(arch, 1);
  auto cfg = quick_config(2);  // batches of 8 and 1
  CHECK_NOTHROW(train(m, set, scripted<LstmModel<double>>({1.0, 0.5}), cfg));

  auto bad = blob_set(3, 6, 1);
  bad.inputs[0] = std::numeric_limits<double>::infinity();
  auto ann = SimpleAnn<double>::build(small_ann(), 1);
  try {
    train(ann, bad, scripted<SimpleAnn<double>>({1.0}), quick_config(3));
    FAIL("expected TrainingError");
  } catch (const TrainingError& e) {
    CHECK(std::string(e.what()).find("epoch 1") != std::string::npos);
  }

  auto no_high = blob_set(3, 6, 1);
  for (auto& y : no_high.labels) y = y == 2 ? 1 : y;
  CHECK_THROWS_AS(train(ann, no_high, scripted<SimpleAnn<double>>({1.0}), quick_config(3)),
                  EmptyClassError);
}

TEST_CASE("train config") {
  TrainConfig c;
  CHECK(c.batch_size == 32);
  CHECK(c.max_epochs == 100);
  CHECK(c.patience == 5);
  CHECK(c.lr == 1.0);
  CHECK(c.rho == 0.95);
  CHECK(c.epsilon == 1e-6);
  CHECK(c.dropout == 0.3);
  CHECK_NOTHROW(c.validate());
  for (auto mutate : std::vector<std::function<void(TrainConfig&)>>{
           [](TrainConfig& t) { t.batch_size = 0; }, [](TrainConfig& t) { t.patience = 0; },
           [](TrainConfig& t) { t.max_epochs = 0; }, [](TrainConfig& t) { t.dropout = 1.0; }}) {
    TrainConfig t;
    mutate(t);
    CHECK_THROWS_AS(t.validate(), ConfigError);
  }
  const auto kv = io::KeyValueConfig::parse(
      "batch_size = 16\nearly_stop_metric = val_accuracy\nclass_weight_mode = uniform\n"
      "precision = f64\nann_wide_first = true\n");
  const auto parsed = TrainConfig::from_key_value(kv);
  CHECK(parsed.batch_size == 16);
  CHECK(parsed.early_stop_metric == EarlyStopMetric::kValAccuracy);
  CHECK(parsed.class_weight_mode == nn::ClassWeightMode::kUniform);
  CHECK(parsed.precision == Precision::kF64);
  CHECK(parsed.ann_wide_first);
  CHECK_THROWS_AS(TrainConfig::from_key_value(io::KeyValueConfig::parse("lr_decay = 1\n")),
                  ConfigError);
}

TEST_CASE("history csv") {
  TrainHistory h;
  h.epochs = {{1, 1.25, 0.5, 0.75}, {2, 0.1, 0.2, 1.0}};
  h.best_epoch = 2;
  CHECK(history_to_csv(h) ==
        "epoch,train_loss,val_loss,val_accuracy\n1,1.25,0.5,0.75\n2,0.1,0.2,1\n");
}
