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

#include "painseq/models/simple_ann.hpp"

#include <string>

#include "painseq/errors.hpp"
#include "painseq/models/params.hpp"

namespace painseq::models {
namespace {

std::string block(std::size_t k, const char* part) {
  return "dense" + std::to_string(k + 1) + "." + part;
}

std::vector<std::size_t> widths(const AnnArchitecture& a) {
  std::vector<std::size_t> w{a.input_dim};
  w.insert(w.end(), a.hidden.begin(), a.hidden.end());
  w.push_back(a.classes);
  return w;
}

void check_arch(const AnnArchitecture& a) {
  if (a.input_dim == 0 || a.classes == 0) throw ConfigError("ann widths must be positive");
  for (auto h : a.hidden) {
    if (h == 0) throw ConfigError("ann hidden widths must be positive");
  }
  nn::DropoutLayer{a.dropout};
}

}  // namespace

AnnArchitecture AnnArchitecture::standard(bool wide_first) {
  AnnArchitecture a;
  if (wide_first) a.hidden = {1024, 128, 32};
  return a;
}

std::size_t AnnArchitecture::parameter_count() const {
  const auto w = widths(*this);
  std::size_t n = 0;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) n += w[i] * w[i + 1] + w[i + 1];
  return n;
}

template <typename T>
void SimpleAnn<T>::init_grads() {
  grads_.clear();
  for (const auto& l : layers_) {
    grads_.push_back({nn::Tensor<T>(l.weight.shape()), nn::Tensor<T>(l.bias.shape())});
  }
}

template <typename T>
SimpleAnn<T> SimpleAnn<T>::build(const AnnArchitecture& arch, std::uint64_t seed) {
  check_arch(arch);
  SimpleAnn m;
  m.arch_ = arch;
  nn::Rng rng(seed);
  const auto w = widths(arch);
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    const bool last = i + 2 == w.size();
    m.layers_.push_back(nn::DenseLayer<T>::xavier(
        w[i], w[i + 1], last ? nn::Activation::kSoftmax : nn::Activation::kRelu, rng));
  }
  m.init_grads();
  return m;
}

template <typename T>
SimpleAnn<T> SimpleAnn<T>::zeros(const AnnArchitecture& arch) {
  check_arch(arch);
  SimpleAnn m;
  m.arch_ = arch;
  const auto w = widths(arch);
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    const bool last = i + 2 == w.size();
    m.layers_.push_back(nn::DenseLayer<T>::zeros(
        w[i], w[i + 1], last ? nn::Activation::kSoftmax : nn::Activation::kRelu));
  }
  m.init_grads();
  return m;
}

template <typename T>
std::vector<nn::ParamRef<T>> SimpleAnn<T>::parameters() {
  std::vector<nn::ParamRef<T>> out;
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    out.push_back({block(k, "weight"), &layers_[k].weight, &grads_[k].weight});
    out.push_back({block(k, "bias"), &layers_[k].bias, &grads_[k].bias});
  }
  return out;
}

template <typename T>
std::size_t SimpleAnn<T>::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += l.weight.size() + l.bias.size();
  return n;
}

template <typename T>
double SimpleAnn<T>::loss_and_grads(const nn::Tensor<T>& x, std::span<const int> labels,
                                    const nn::ClassWeights& weights, nn::Rng& rng) {
  const nn::DropoutLayer dropout(arch_.dropout);
  const std::size_t n = layers_.size();
  std::vector<nn::DenseCache<T>> caches(n);
  std::vector<nn::Tensor<T>> masks(n);
  nn::Tensor<T> h = x;
  for (std::size_t k = 0; k < n; ++k) {
    h = nn::dense_forward(layers_[k], h, &caches[k]);
    if (k + 1 < n) h = nn::dropout_apply(dropout, h, nn::Mode::kTrain, rng, &masks[k]);
  }
  auto loss = nn::weighted_ce_from_logits(caches[n - 1].preact, labels, weights);

  auto back = nn::dense_backward_preact(layers_[n - 1], caches[n - 1].input, loss.grad_logits,
                                        n > 1);
  grads_[n - 1] = std::move(back.grads);
  for (std::size_t k = n - 1; k-- > 0;) {
    const nn::Tensor<T> g = nn::dropout_backward(masks[k], back.grad_input);
    back = nn::dense_backward(layers_[k], caches[k], g, k > 0);
    grads_[k] = std::move(back.grads);
  }
  return loss.loss;
}

template <typename T>
nn::Tensor<T> SimpleAnn<T>::predict_batch(const nn::Tensor<T>& x) const {
  nn::Tensor<T> h = x;
  for (const auto& l : layers_) h = nn::dense_forward(l, h);
  return h;
}

template <typename T>
nn::Tensor<T> SimpleAnn<T>::predict_frames(const data::FeatureSequence& seq) const {
  if (seq.dim() != arch_.input_dim) {
    throw DimensionError("ann expects " + std::to_string(arch_.input_dim) +
                         "-dim frames, got " + std::to_string(seq.dim()));
  }
  nn::Tensor<T> x({seq.frames(), seq.dim()});
  seq.copy_rows(0, seq.frames(), x.data());
  return predict_batch(x);
}

template <typename T>
io::Checkpoint SimpleAnn<T>::to_checkpoint() const {
  io::Checkpoint c;
  add_scalar(c, "meta.ann.dropout", arch_.dropout);
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    c.add(block(k, "weight"), layers_[k].weight);
    c.add(block(k, "bias"), layers_[k].bias);
  }
  return c;
}

template <typename T>
SimpleAnn<T> SimpleAnn<T>::from_checkpoint(const io::Checkpoint& checkpoint) {
  if (!is_ann_checkpoint(checkpoint)) {
    throw TopologyError("checkpoint does not contain an ann model (no dense1.weight)");
  }
  std::vector<nn::Tensor<T>> weights;
  for (std::size_t k = 0; checkpoint.find(block(k, "weight")) != nullptr; ++k) {
    weights.push_back(checkpoint.require(block(k, "weight")).tensor<T>());
  }
  if (weights.size() < 2) throw TopologyError("ann checkpoint needs at least two dense layers");
  AnnArchitecture arch;
  arch.hidden.clear();
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k].rank() != 2) {
      throw TopologyError(block(k, "weight") + " must be rank 2, got " +
                          nn::shape_string(weights[k].shape()));
    }
    if (k > 0 && weights[k].dim(0) != weights[k - 1].dim(1)) {
      throw TopologyError(block(k, "weight") + " input width " +
                          std::to_string(weights[k].dim(0)) + " does not match previous output " +
                          std::to_string(weights[k - 1].dim(1)));
    }
    if (k + 1 < weights.size()) arch.hidden.push_back(weights[k].dim(1));
  }
  arch.input_dim = weights.front().dim(0);
  arch.classes = weights.back().dim(1);
  if (arch.classes != kNumClasses) {
    throw TopologyError("ann output width " + std::to_string(arch.classes) + ", expected 3");
  }
  arch.dropout = take_scalar(checkpoint, "meta.ann.dropout", arch.dropout);
  SimpleAnn m = zeros(arch);
  for (std::size_t k = 0; k < weights.size(); ++k) {
    m.layers_[k].weight = std::move(weights[k]);
    m.layers_[k].bias = take_tensor<T>(checkpoint, block(k, "bias"), {m.layers_[k].out_dim()});
  }
  return m;
}

bool is_ann_checkpoint(const io::Checkpoint& checkpoint) {
  return checkpoint.find("dense1.weight") != nullptr && checkpoint.find("lstm1.w_input") == nullptr;
}

template class SimpleAnn<float>;
template class SimpleAnn<double>;

}  // namespace painseq::models
