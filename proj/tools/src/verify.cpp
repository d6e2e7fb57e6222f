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

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "painseq/data/fseq.hpp"
#include "painseq/data/segment.hpp"
#include "painseq/errors.hpp"
#include "painseq/eval/metrics.hpp"
#include "painseq/eval/voting.hpp"
#include "painseq/extractor/ops.hpp"
#include "painseq/io/checkpoint.hpp"
#include "painseq/models/early_stopping.hpp"
#include "painseq/models/lstm_model.hpp"
#include "painseq/models/simple_ann.hpp"
#include "painseq/nn/adadelta.hpp"
#include "painseq/nn/batchnorm.hpp"
#include "painseq/nn/dense.hpp"
#include "painseq/nn/dropout.hpp"
#include "painseq/nn/gradcheck.hpp"
#include "painseq/nn/loss.hpp"
#include "painseq/nn/lstm.hpp"
#include "painseq_cli/cli.hpp"

namespace painseq::cli {
namespace {

using nn::ParamRef;
using nn::Rng;
using nn::Tensor;

constexpr double kGradTolerance = 1e-4;

Tensor<double> random_tensor(nn::Shape shape, Rng& rng, double scale = 1.0) {
  Tensor<double> t(std::move(shape));
  std::normal_distribution<double> normal(0.0, scale);
  for (auto& v : t.values()) v = normal(rng);
  return t;
}

double dot(const Tensor<double>& a, const Tensor<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<int> random_labels(std::size_t n, Rng& rng) {
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = static_cast<int>(i % kNumClasses);
  std::shuffle(y.begin(), y.end(), rng);
  return y;
}

// Runs one gradient check per seed and reports the worst block.
struct GradCase {
  std::vector<ParamRef<double>> params;
  std::function<double()> loss;
  std::function<void()> backward;
};

CheckResult grad_suite(const std::string& name, const VerifyOptions& opt,
                       const std::function<void(std::uint64_t, GradCase&)>& setup) {
  double worst = 0.0;
  std::string worst_block;
  for (std::size_t s = 0; s < opt.seeds; ++s) {
    GradCase c;
    setup(opt.base_seed + s, c);
    auto backward = c.backward;
    if (opt.inject_grad_fault) {
      backward = [&c, inner = c.backward] {
        inner();
        auto& g = *c.params.front().grad;
        g[0] += 1e-3 * (std::abs(g[0]) + 1.0);
      };
    }
    const auto report = nn::grad_check(c.params, c.loss, backward);
    for (const auto& b : report.blocks) {
      if (b.max_rel_error >= worst) {
        worst = b.max_rel_error;
        worst_block = b.name;
      }
    }
  }
  return {name, worst < kGradTolerance,
          fmt::format("max rel err {:.2e} in {}, {} seeds", worst, worst_block, opt.seeds)};
}

CheckResult check_dense(const VerifyOptions& opt) {
  return grad_suite("gradient: dense + relu", opt, [](std::uint64_t seed, GradCase& c) {
    Rng rng(seed);
    struct State {
      nn::DenseLayer<double> layer;
      Tensor<double> x, gx, r;
    };
    auto st = std::make_shared<State>();
    st->layer = nn::DenseLayer<double>::xavier(5, 4, nn::Activation::kRelu, rng);
    st->layer.bias = random_tensor({4}, rng, 0.1);
    st->x = random_tensor({3, 5}, rng);
    st->gx = Tensor<double>({3, 5});
    st->r = random_tensor({3, 4}, rng);
    auto grads = std::make_shared<nn::DenseGrads<double>>();
    grads->weight = Tensor<double>(st->layer.weight.shape());
    grads->bias = Tensor<double>({4});
    c.params = {{"weight", &st->layer.weight, &grads->weight},
                {"bias", &st->layer.bias, &grads->bias},
                {"x", &st->x, &st->gx}};
    c.loss = [st] { return dot(nn::dense_forward(st->layer, st->x), st->r); };
    c.backward = [st, grads] {
      auto b = nn::dense_backward(st->layer, st->x, st->r);
      *grads = b.grads;
      st->gx = b.grad_input;
    };
  });
}

CheckResult check_lstm(const VerifyOptions& opt) {
  return grad_suite("gradient: lstm (bptt)", opt, [](std::uint64_t seed, GradCase& c) {
    Rng rng(seed);
    struct State {
      nn::LstmLayer<double> layer;
      nn::LstmGrads<double> g;
      Tensor<double> x, gx, r;
    };
    auto st = std::make_shared<State>();
    st->layer = nn::LstmLayer<double>::xavier(4, 3, rng);
    st->layer.bias = random_tensor({12}, rng, 0.3);
    st->x = random_tensor({2, 5, 4}, rng);
    st->r = random_tensor({2, 5, 3}, rng);
    c.params = {{"w_input", &st->layer.w_input, &st->g.w_input},
                {"w_recurrent", &st->layer.w_recurrent, &st->g.w_recurrent},
                {"bias", &st->layer.bias, &st->g.bias},
                {"x", &st->x, &st->gx}};
    c.loss = [st] { return dot(nn::lstm_forward(st->layer, st->x).outputs, st->r); };
    c.backward = [st] {
      nn::LstmCache<double> cache;
      nn::lstm_forward(st->layer, st->x, &cache);
      auto b = nn::lstm_backward(st->layer, cache, st->r);
      st->g = b.grads;
      st->gx = b.grad_input;
    };
  });
}

CheckResult check_batchnorm(const VerifyOptions& opt) {
  return grad_suite("gradient: batch-norm (train mode)", opt, [](std::uint64_t seed, GradCase& c) {
    Rng rng(seed);
    struct State {
      nn::BatchNormLayer<double> layer;
      Tensor<double> gg, gb, x, gx, r;
    };
    auto st = std::make_shared<State>();
    st->layer = nn::BatchNormLayer<double>::identity(4);
    st->layer.gamma = random_tensor({4}, rng);
    st->layer.beta = random_tensor({4}, rng);
    st->x = random_tensor({3, 2, 4}, rng, 2.0);
    st->r = random_tensor({3, 2, 4}, rng);
    c.params = {{"gamma", &st->layer.gamma, &st->gg},
                {"beta", &st->layer.beta, &st->gb},
                {"x", &st->x, &st->gx}};
    c.loss = [st] {
      auto layer = st->layer;
      return dot(nn::batchnorm_forward(layer, st->x, nn::Mode::kTrain), st->r);
    };
    c.backward = [st] {
      auto layer = st->layer;
      nn::BatchNormCache<double> cache;
      nn::batchnorm_forward(layer, st->x, nn::Mode::kTrain, &cache);
      auto b = nn::batchnorm_backward(layer, cache, st->r);
      st->gg = b.grad_gamma;
      st->gb = b.grad_beta;
      st->gx = b.grad_input;
    };
  });
}

CheckResult check_dropout(const VerifyOptions& opt) {
  return grad_suite("gradient: dropout (fixed mask and off path)", opt,
                    [](std::uint64_t seed, GradCase& c) {
    Rng rng(seed);
    struct State {
      Tensor<double> x, gx, y, gy, r;
      std::uint64_t seed;
    };
    auto st = std::make_shared<State>();
    st->seed = seed;
    st->x = random_tensor({4, 6}, rng);
    st->y = random_tensor({4, 6}, rng);
    st->r = random_tensor({4, 6}, rng);
    c.params = {{"x (rate 0.3)", &st->x, &st->gx}, {"y (rate 0)", &st->y, &st->gy}};
    c.loss = [st] {
      Rng r(st->seed);
      const auto a = nn::dropout_apply(nn::DropoutLayer(0.3), st->x, nn::Mode::kTrain, r);
      const auto b = nn::dropout_apply(nn::DropoutLayer(0.0), st->y, nn::Mode::kTrain, r);
      return dot(a, st->r) + dot(b, st->r);
    };
    c.backward = [st] {
      Rng r(st->seed);
      Tensor<double> ma, mb;
      nn::dropout_apply(nn::DropoutLayer(0.3), st->x, nn::Mode::kTrain, r, &ma);
      nn::dropout_apply(nn::DropoutLayer(0.0), st->y, nn::Mode::kTrain, r, &mb);
      st->gx = nn::dropout_backward(ma, st->r);
      st->gy = nn::dropout_backward(mb, st->r);
    };
  });
}

CheckResult check_softmax_ce(const VerifyOptions& opt) {
  return grad_suite("gradient: fused softmax + weighted cross-entropy", opt,
                    [](std::uint64_t seed, GradCase& c) {
    Rng rng(seed);
    struct State {
      Tensor<double> logits, g;
      std::vector<int> labels;
      nn::ClassWeights w;
    };
    auto st = std::make_shared<State>();
    st->logits = random_tensor({6, 3}, rng, 2.0);
    st->labels = random_labels(6, rng);
    const std::array<std::size_t, 3> counts{3, 2, 1};
    st->w = nn::class_weights_from_counts(counts);
    c.params = {{"logits", &st->logits, &st->g}};
    c.loss = [st] { return nn::weighted_ce_from_logits(st->logits, st->labels, st->w).loss; };
    c.backward = [st] {
      st->g = nn::weighted_ce_loss(nn::softmax_rows(st->logits), st->labels, st->w).grad_logits;
    };
  });
}

CheckResult check_ann_model(const VerifyOptions& opt) {
  return grad_suite("gradient: simple ann, scaled-down", opt, [](std::uint64_t seed, GradCase& c) {
    models::AnnArchitecture arch;
    arch.input_dim = 8;
    arch.hidden = {6, 5};
    arch.dropout = 0.0;
    struct State {
      models::SimpleAnn<double> model;
      Tensor<double> x;
      std::vector<int> labels;
    };
    auto st = std::make_shared<State>();
    st->model = models::SimpleAnn<double>::build(arch, seed);
    Rng rng(seed ^ 0x5eedULL);
    for (auto& l : st->model.layers()) l.bias = random_tensor(l.bias.shape(), rng, 0.1);
    st->x = random_tensor({6, 8}, rng);
    st->labels = random_labels(6, rng);
    c.params = st->model.parameters();
    auto run = [st] {
      Rng r(0);
      return st->model.loss_and_grads(st->x, st->labels, nn::ClassWeights::uniform(), r);
    };
    c.loss = run;
    c.backward = [run] { run(); };
  });
}

CheckResult check_lstm_model(const VerifyOptions& opt) {
  return grad_suite("gradient: lstm model, 5 frames x 8 features", opt,
                    [](std::uint64_t seed, GradCase& c) {
    auto arch = models::LstmArchitecture::scaled_down();
    arch.dropout = 0.0;
    struct State {
      models::LstmModel<double> model;
      Tensor<double> x;
      std::vector<int> labels;
    };
    auto st = std::make_shared<State>();
    st->model = models::LstmModel<double>::build(arch, seed);
    Rng rng(seed ^ 0x15a7ULL);
    st->x = random_tensor({4, arch.seq_len, arch.input_dim}, rng);
    st->labels = random_labels(4, rng);
    c.params = st->model.parameters();
    auto run = [st] {
      Rng r(0);
      return st->model.loss_and_grads(st->x, st->labels, nn::ClassWeights::uniform(), r);
    };
    c.loss = run;
    c.backward = [run] { run(); };
  });
}

CheckResult check_vote() {
  Rng rng(2024);
  std::uniform_int_distribution<int> len(1, 12);
  std::uniform_int_distribution<int> level(0, 3);
  std::size_t mismatches = 0;
  std::size_t ties = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const auto frames = static_cast<std::size_t>(len(rng));
    Tensor<double> p({frames, 3});
    for (auto& v : p.values()) v = 0.25 * level(rng);  // coarse grid forces ties
    std::array<std::size_t, 3> count{};
    std::array<double, 3> mass{};
    for (std::size_t f = 0; f < frames; ++f) {
      std::size_t arg = 0;
      for (std::size_t k = 0; k < 3; ++k) {
        mass[k] += p.at(f, k);
        if (p.at(f, k) > p.at(f, arg)) arg = k;
      }
      ++count[arg];
    }
    std::size_t expect = 0;
    for (std::size_t k = 1; k < 3; ++k) {
      if (count[k] > count[expect] || (count[k] == count[expect] && mass[k] > mass[expect])) {
        expect = k;
      }
    }
    const auto got = eval::majority_vote(p);
    if (got.tie_broken) ++ties;
    if (static_cast<std::size_t>(to_index(got.label)) != expect) ++mismatches;
  }
  return {"majority vote vs counting oracle", mismatches == 0,
          fmt::format("10000 cases, {} with ties, {} mismatches", ties, mismatches)};
}

CheckResult check_metrics() {
  eval::ConfusionMatrix cm;
  cm.counts = {{{5, 5, 0}, {0, 10, 0}, {0, 5, 5}}};
  const auto r = eval::metrics(cm);
  const auto& pc = *r.per_class;
  const bool ok = *r.accuracy == 20.0 / 30.0 && pc[0].recall == 0.5 && pc[1].recall == 1.0 &&
                  pc[2].recall == 0.5 && pc[0].precision == 1.0 && pc[1].precision == 0.5 &&
                  pc[2].precision == 1.0;
  return {"metrics on [[5,5,0],[0,10,0],[0,5,5]]", ok,
          fmt::format("accuracy {}", *r.accuracy)};
}

CheckResult check_class_weights() {
  const std::array<std::size_t, 3> a{20, 10, 10};
  const std::array<std::size_t, 3> b{140, 70, 70};
  const auto wa = nn::class_weights_from_counts(a);
  const auto wb = nn::class_weights_from_counts(b);
  const bool ok = wa.weight[0] == 40.0 / 60.0 && wa.weight[1] == 40.0 / 30.0 &&
                  wa.weight[2] == 40.0 / 30.0 && wa.weight == wb.weight;
  return {"class weights (20,10,10) and x7 scaling", ok,
          fmt::format("{} {} {}", wa.weight[0], wa.weight[1], wa.weight[2])};
}

CheckResult check_adadelta() {
  nn::AdadeltaConfig cfg;
  nn::AdadeltaSlot<double> slot{"x", Tensor<double>({1}), Tensor<double>({1})};
  std::vector<double> x{0.0};
  const std::vector<double> g{1.0};
  nn::adadelta_update<double>(x, g, slot, cfg);
  const double first = x[0];
  // Hand-stepped reference for the same scalar.
  double eg = 0.0, ed = 0.0, ref = 0.0;
  std::vector<double> grads{1.0, -0.5, 0.25, 2.0, -1.0};
  nn::AdadeltaSlot<double> s2{"y", Tensor<double>({1}), Tensor<double>({1})};
  std::vector<double> y{0.0};
  double worst = 0.0;
  for (double gi : grads) {
    eg = cfg.rho * eg + (1 - cfg.rho) * gi * gi;
    const double dx = -cfg.lr * std::sqrt(ed + cfg.epsilon) / std::sqrt(eg + cfg.epsilon) * gi;
    ed = cfg.rho * ed + (1 - cfg.rho) * dx * dx;
    ref += dx;
    const std::vector<double> gv{gi};
    nn::adadelta_update<double>(y, gv, s2, cfg);
    worst = std::max(worst, std::abs(y[0] - ref));
  }
  const bool ok = std::abs(first - (-0.004472)) < 1e-6 && worst < 1e-12;
  return {"adadelta first step and 5-step trajectory", ok,
          fmt::format("first step {:.7f}, trajectory error {:.1e}", first, worst)};
}

CheckResult check_early_stopping() {
  models::EarlyStopping stop(models::EarlyStopMetric::kValLoss, 5);
  const std::vector<double> losses{1.0, 0.9, 0.91, 0.92, 0.93, 0.94, 0.95, 0.96, 0.97};
  std::size_t epochs = 0;
  for (double v : losses) {
    ++epochs;
    stop.update(v);
    if (stop.should_stop()) break;
  }
  return {"early stopping on a scripted plateau", epochs == 7 && stop.best_epoch() == 2,
          fmt::format("stopped after {} epochs, best {}", epochs, stop.best_epoch())};
}

CheckResult check_extractor_ops() {
  Rng rng(7);
  extractor::FeatureMap<double> in(2, 5, 5);
  std::normal_distribution<double> normal;
  for (auto& v : in.data) v = normal(rng);
  std::vector<double> w(3 * 2 * 9), b(3);
  for (auto& v : w) v = normal(rng);
  for (auto& v : b) v = normal(rng);
  const auto out = extractor::conv3x3_same<double>(in, w, b, 3, false);
  double conv_err = 0.0;
  for (std::size_t o = 0; o < 3; ++o) {
    for (long y = 0; y < 5; ++y) {
      for (long x = 0; x < 5; ++x) {
        double s = b[o];
        for (std::size_t c = 0; c < 2; ++c) {
          for (long ky = 0; ky < 3; ++ky) {
            for (long kx = 0; kx < 3; ++kx) {
              const long sy = y + ky - 1, sx = x + kx - 1;
              if (sy < 0 || sy >= 5 || sx < 0 || sx >= 5) continue;
              s += w[((o * 2 + c) * 3 + ky) * 3 + kx] * in.at(c, sy, sx);
            }
          }
        }
        conv_err = std::max(conv_err, std::abs(s - out.at(o, y, x)));
      }
    }
  }
  const auto gap = extractor::global_average_pool(in);
  double gap_err = 0.0;
  for (std::size_t c = 0; c < 2; ++c) {
    double s = 0.0;
    for (std::size_t i = 0; i < 25; ++i) s += in.data[c * 25 + i];
    gap_err = std::max(gap_err, std::abs(s / 25.0 - gap[c]));
  }
  return {"conv3x3 and global average pool vs scalar loops", conv_err < 1e-12 && gap_err < 1e-12,
          fmt::format("conv err {:.1e}, gap err {:.1e}", conv_err, gap_err)};
}

CheckResult check_fseq(bool corrupt) {
  Rng rng(11);
  std::normal_distribution<double> normal;
  bool ok = true;
  std::string detail = "f32 and f64 fixtures bit-exact";
  for (auto dtype : {io::DType::kF32, io::DType::kF64}) {
    data::FeatureSequence seq(7, 5, 30.0, dtype);
    for (std::size_t f = 0; f < 7; ++f) {
      for (std::size_t d = 0; d < 5; ++d) seq.set(f, d, normal(rng));
    }
    auto bytes = data::encode_fseq(seq);
    if (corrupt) bytes[bytes.size() - 3] ^= std::byte{0x5a};
    try {
      if (!(data::decode_fseq(bytes) == seq)) {
        ok = false;
        detail = fmt::format("{} values differ after round trip", io::dtype_name(dtype));
      }
    } catch (const Error& e) {
      ok = false;
      detail = e.what();
    }
  }
  return {"fseq round trip", ok, detail};
}

CheckResult check_psqw() {
  Rng rng(13);
  io::Checkpoint c;
  c.add("a", random_tensor({3, 4}, rng));
  c.add("b", nn::tensor_cast<float>(random_tensor({2, 3, 2}, rng)));
  c.add("c", random_tensor({1}, rng));
  const auto back = io::decode_checkpoint(io::encode_checkpoint(c));
  bool ok = back.entries.size() == c.entries.size();
  for (std::size_t i = 0; ok && i < c.entries.size(); ++i) {
    ok = back.entries[i].name == c.entries[i].name && back.entries[i].dtype == c.entries[i].dtype &&
         back.entries[i].shape == c.entries[i].shape && back.entries[i].raw == c.entries[i].raw;
  }
  return {"psqw round trip", ok, ""};
}

CheckResult check_segmentation() {
  data::FeatureSequence seq(1800, 2, 30.0);
  for (std::size_t f = 0; f < 1800; ++f) seq.set(f, 0, static_cast<double>(f));
  const auto parts = data::segment_sequence(seq, 300, 300);
  bool ok = parts.size() == 6;
  for (std::size_t i = 0; ok && i < parts.size(); ++i) {
    ok = parts[i].frames() == 300 && parts[i].at(0, 0) == static_cast<double>(i * 300) &&
         parts[i].at(299, 0) == static_cast<double>(i * 300 + 299);
  }
  return {"segmentation of 1800 frames", ok, fmt::format("{} segments", parts.size())};
}

}  // namespace

std::vector<CheckResult> run_verify(const VerifyOptions& options) {
  std::vector<CheckResult> out;
  out.push_back(check_dense(options));
  out.push_back(check_lstm(options));
  out.push_back(check_batchnorm(options));
  out.push_back(check_dropout(options));
  out.push_back(check_softmax_ce(options));
  out.push_back(check_ann_model(options));
  out.push_back(check_lstm_model(options));
  out.push_back(check_vote());
  out.push_back(check_metrics());
  out.push_back(check_class_weights());
  out.push_back(check_adadelta());
  out.push_back(check_early_stopping());
  out.push_back(check_extractor_ops());
  out.push_back(check_fseq(options.corrupt_fseq));
  out.push_back(check_psqw());
  out.push_back(check_segmentation());
  return out;
}

}  // namespace painseq::cli
