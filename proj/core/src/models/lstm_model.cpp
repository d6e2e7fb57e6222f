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

#include "painseq/models/lstm_model.hpp"

#include <string>

#include "painseq/errors.hpp"
#include "painseq/models/params.hpp"
#include "painseq/nn/dropout.hpp"

namespace painseq::models {
namespace {

template <typename T>
nn::Tensor<T> zeros_like(const nn::Tensor<T>& t) {
  return nn::Tensor<T>(t.shape());
}

template <typename T>
void add_bn(io::Checkpoint& c, const std::string& name, const nn::BatchNormLayer<T>& bn) {
  c.add(name + ".gamma", bn.gamma);
  c.add(name + ".beta", bn.beta);
  c.add(name + ".running_mean", bn.running_mean);
  c.add(name + ".running_var", bn.running_var);
}

template <typename T>
void take_bn(const io::Checkpoint& c, const std::string& name, nn::BatchNormLayer<T>& bn) {
  const nn::Shape s{bn.features()};
  bn.gamma = take_tensor<T>(c, name + ".gamma", s);
  bn.beta = take_tensor<T>(c, name + ".beta", s);
  bn.running_mean = take_tensor<T>(c, name + ".running_mean", s);
  bn.running_var = take_tensor<T>(c, name + ".running_var", s);
}

std::size_t dim_of(const io::Checkpoint& c, const std::string& name, std::size_t axis) {
  const auto shape = c.require(name).tensor_shape();
  if (axis >= shape.size()) {
    throw TopologyError("checkpoint entry \"" + name + "\" has rank " +
                        std::to_string(shape.size()));
  }
  return shape[axis];
}

}  // namespace

LstmArchitecture LstmArchitecture::scaled_down() {
  LstmArchitecture a;
  a.input_dim = 8;
  a.lstm1 = 4;
  a.lstm2 = 3;
  a.dense = 3;
  a.seq_len = 5;
  return a;
}

std::size_t LstmArchitecture::parameter_count() const {
  auto lstm = [](std::size_t in, std::size_t u) { return in * 4 * u + u * 4 * u + 4 * u; };
  return 2 * input_dim + lstm(input_dim, lstm1) + 2 * lstm1 + lstm(lstm1, lstm2) + 2 * lstm2 +
         lstm2 * dense + dense + dense * classes + classes;
}

template <typename T>
void LstmModel<T>::init_grads() {
  grads_.bn_input_gamma = zeros_like(bn_input.gamma);
  grads_.bn_input_beta = zeros_like(bn_input.beta);
  grads_.lstm1 = {zeros_like(lstm1.w_input), zeros_like(lstm1.w_recurrent),
                  zeros_like(lstm1.bias)};
  grads_.bn1_gamma = zeros_like(bn1.gamma);
  grads_.bn1_beta = zeros_like(bn1.beta);
  grads_.lstm2 = {zeros_like(lstm2.w_input), zeros_like(lstm2.w_recurrent),
                  zeros_like(lstm2.bias)};
  grads_.bn2_gamma = zeros_like(bn2.gamma);
  grads_.bn2_beta = zeros_like(bn2.beta);
  grads_.fc1 = {zeros_like(fc1.weight), zeros_like(fc1.bias)};
  grads_.fc2 = {zeros_like(fc2.weight), zeros_like(fc2.bias)};
}

template <typename T>
LstmModel<T> LstmModel<T>::build(const LstmArchitecture& arch, std::uint64_t seed) {
  if (arch.input_dim == 0 || arch.lstm1 == 0 || arch.lstm2 == 0 || arch.dense == 0 ||
      arch.classes == 0 || arch.seq_len == 0) {
    throw ConfigError("lstm model widths and sequence length must be positive");
  }
  nn::DropoutLayer{arch.dropout};
  LstmModel m;
  m.arch_ = arch;
  nn::Rng rng(seed);
  m.bn_input = nn::BatchNormLayer<T>::identity(arch.input_dim, arch.bn_momentum, arch.bn_epsilon);
  m.lstm1 = nn::LstmLayer<T>::xavier(arch.input_dim, arch.lstm1, rng);
  m.bn1 = nn::BatchNormLayer<T>::identity(arch.lstm1, arch.bn_momentum, arch.bn_epsilon);
  m.lstm2 = nn::LstmLayer<T>::xavier(arch.lstm1, arch.lstm2, rng);
  m.bn2 = nn::BatchNormLayer<T>::identity(arch.lstm2, arch.bn_momentum, arch.bn_epsilon);
  m.fc1 = nn::DenseLayer<T>::xavier(arch.lstm2, arch.dense, nn::Activation::kRelu, rng);
  m.fc2 = nn::DenseLayer<T>::xavier(arch.dense, arch.classes, nn::Activation::kSoftmax, rng);
  m.init_grads();
  return m;
}

template <typename T>
std::vector<nn::ParamRef<T>> LstmModel<T>::parameters() {
  return {
      {"bn_input.gamma", &bn_input.gamma, &grads_.bn_input_gamma},
      {"bn_input.beta", &bn_input.beta, &grads_.bn_input_beta},
      {"lstm1.w_input", &lstm1.w_input, &grads_.lstm1.w_input},
      {"lstm1.w_recurrent", &lstm1.w_recurrent, &grads_.lstm1.w_recurrent},
      {"lstm1.bias", &lstm1.bias, &grads_.lstm1.bias},
      {"bn1.gamma", &bn1.gamma, &grads_.bn1_gamma},
      {"bn1.beta", &bn1.beta, &grads_.bn1_beta},
      {"lstm2.w_input", &lstm2.w_input, &grads_.lstm2.w_input},
      {"lstm2.w_recurrent", &lstm2.w_recurrent, &grads_.lstm2.w_recurrent},
      {"lstm2.bias", &lstm2.bias, &grads_.lstm2.bias},
      {"bn2.gamma", &bn2.gamma, &grads_.bn2_gamma},
      {"bn2.beta", &bn2.beta, &grads_.bn2_beta},
      {"fc1.weight", &fc1.weight, &grads_.fc1.weight},
      {"fc1.bias", &fc1.bias, &grads_.fc1.bias},
      {"fc2.weight", &fc2.weight, &grads_.fc2.weight},
      {"fc2.bias", &fc2.bias, &grads_.fc2.bias},
  };
}

template <typename T>
std::size_t LstmModel<T>::parameter_count() const {
  return arch_.parameter_count();
}

template <typename T>
void LstmModel<T>::check_input(const nn::Tensor<T>& x) const {
  if (x.rank() != 3 || x.dim(1) != arch_.seq_len || x.dim(2) != arch_.input_dim) {
    throw DimensionError("lstm model expects (batch x " + std::to_string(arch_.seq_len) + " x " +
                         std::to_string(arch_.input_dim) + "), got " +
                         nn::shape_string(x.shape()));
  }
}

template <typename T>
double LstmModel<T>::loss_and_grads(const nn::Tensor<T>& x, std::span<const int> labels,
                                    const nn::ClassWeights& weights, nn::Rng& rng) {
  check_input(x);
  const std::size_t batch = x.dim(0);
  if (batch < 2) {
    throw DegenerateBatchError("lstm model batch of " + std::to_string(batch) +
                               " sequence(s) gives no batch statistics for bn2");
  }
  const nn::DropoutLayer dropout(arch_.dropout);

  nn::BatchNormCache<T> c_bn0, c_bn1, c_bn2;
  nn::LstmCache<T> c_l1, c_l2;
  nn::DenseCache<T> c_fc1, c_fc2;
  nn::Tensor<T> m1, m2;

  nn::Tensor<T> h = nn::batchnorm_forward(bn_input, x, nn::Mode::kTrain, &c_bn0);
  h = nn::lstm_forward(lstm1, h, &c_l1).outputs;
  h = nn::batchnorm_forward(bn1, h, nn::Mode::kTrain, &c_bn1);
  h = nn::dropout_apply(dropout, h, nn::Mode::kTrain, rng, &m1);
  h = nn::lstm_forward(lstm2, h, &c_l2).final_hidden;
  h = nn::batchnorm_forward(bn2, h, nn::Mode::kTrain, &c_bn2);
  h = nn::dropout_apply(dropout, h, nn::Mode::kTrain, rng, &m2);
  h = nn::dense_forward(fc1, h, &c_fc1);
  nn::dense_forward(fc2, h, &c_fc2);
  auto loss = nn::weighted_ce_from_logits(c_fc2.preact, labels, weights);

  auto b_fc2 = nn::dense_backward_preact(fc2, c_fc2.input, loss.grad_logits);
  grads_.fc2 = std::move(b_fc2.grads);
  auto b_fc1 = nn::dense_backward(fc1, c_fc1, b_fc2.grad_input);
  grads_.fc1 = std::move(b_fc1.grads);
  auto b_bn2 = nn::batchnorm_backward(bn2, c_bn2, nn::dropout_backward(m2, b_fc1.grad_input));
  grads_.bn2_gamma = std::move(b_bn2.grad_gamma);
  grads_.bn2_beta = std::move(b_bn2.grad_beta);

  // Only the last time step of lstm2 feeds the head.
  const std::size_t time = arch_.seq_len;
  const std::size_t u2 = arch_.lstm2;
  nn::Tensor<T> up2({batch, time, u2});
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t j = 0; j < u2; ++j) up2.at(b, time - 1, j) = b_bn2.grad_input.at(b, j);
  }
  auto b_l2 = nn::lstm_backward(lstm2, c_l2, up2);
  grads_.lstm2 = std::move(b_l2.grads);
  auto b_bn1 = nn::batchnorm_backward(bn1, c_bn1, nn::dropout_backward(m1, b_l2.grad_input));
  grads_.bn1_gamma = std::move(b_bn1.grad_gamma);
  grads_.bn1_beta = std::move(b_bn1.grad_beta);
  auto b_l1 = nn::lstm_backward(lstm1, c_l1, b_bn1.grad_input);
  grads_.lstm1 = std::move(b_l1.grads);
  auto b_bn0 = nn::batchnorm_backward(bn_input, c_bn0, b_l1.grad_input, false);
  grads_.bn_input_gamma = std::move(b_bn0.grad_gamma);
  grads_.bn_input_beta = std::move(b_bn0.grad_beta);
  return loss.loss;
}

template <typename T>
nn::Tensor<T> LstmModel<T>::predict_batch(const nn::Tensor<T>& x) const {
  check_input(x);
  nn::Tensor<T> h = nn::batchnorm_infer(bn_input, x);
  h = nn::lstm_forward(lstm1, h).outputs;
  h = nn::batchnorm_infer(bn1, h);
  h = nn::lstm_forward(lstm2, h).final_hidden;
  h = nn::batchnorm_infer(bn2, h);
  h = nn::dense_forward(fc1, h);
  return nn::dense_forward(fc2, h);
}

template <typename T>
nn::Tensor<T> LstmModel<T>::predict_sequence(const data::FeatureSequence& seq) const {
  if (seq.frames() != arch_.seq_len) {
    throw ShortVideoError("sequence '" + seq.source_id + "' has " +
                          std::to_string(seq.frames()) + " frames, the lstm model needs exactly " +
                          std::to_string(arch_.seq_len));
  }
  if (seq.dim() != arch_.input_dim) {
    throw DimensionError("lstm model expects " + std::to_string(arch_.input_dim) +
                         "-dim frames, got " + std::to_string(seq.dim()));
  }
  nn::Tensor<T> x({1, seq.frames(), seq.dim()});
  seq.copy_rows(0, seq.frames(), x.data());
  auto p = predict_batch(x);
  p.reshape({arch_.classes});
  return p;
}

template <typename T>
io::Checkpoint LstmModel<T>::to_checkpoint() const {
  io::Checkpoint c;
  add_scalar(c, "meta.lstm.seq_len", static_cast<double>(arch_.seq_len));
  add_scalar(c, "meta.lstm.dropout", arch_.dropout);
  add_scalar(c, "meta.lstm.bn_momentum", arch_.bn_momentum);
  add_scalar(c, "meta.lstm.bn_epsilon", arch_.bn_epsilon);
  add_bn(c, "bn_input", bn_input);
  c.add("lstm1.w_input", lstm1.w_input);
  c.add("lstm1.w_recurrent", lstm1.w_recurrent);
  c.add("lstm1.bias", lstm1.bias);
  add_bn(c, "bn1", bn1);
  c.add("lstm2.w_input", lstm2.w_input);
  c.add("lstm2.w_recurrent", lstm2.w_recurrent);
  c.add("lstm2.bias", lstm2.bias);
  add_bn(c, "bn2", bn2);
  c.add("fc1.weight", fc1.weight);
  c.add("fc1.bias", fc1.bias);
  c.add("fc2.weight", fc2.weight);
  c.add("fc2.bias", fc2.bias);
  return c;
}

template <typename T>
LstmModel<T> LstmModel<T>::from_checkpoint(const io::Checkpoint& c) {
  if (!is_lstm_checkpoint(c)) {
    throw TopologyError("checkpoint does not contain an lstm model (no lstm1.w_input)");
  }
  LstmArchitecture a;
  a.input_dim = dim_of(c, "lstm1.w_input", 0);
  a.lstm1 = dim_of(c, "lstm1.w_recurrent", 0);
  a.lstm2 = dim_of(c, "lstm2.w_recurrent", 0);
  a.dense = dim_of(c, "fc1.weight", 1);
  a.classes = dim_of(c, "fc2.weight", 1);
  if (a.classes != kNumClasses) {
    throw TopologyError("lstm output width " + std::to_string(a.classes) + ", expected 3");
  }
  a.seq_len = static_cast<std::size_t>(take_scalar(c, "meta.lstm.seq_len", 300.0));
  a.dropout = take_scalar(c, "meta.lstm.dropout", a.dropout);
  a.bn_momentum = take_scalar(c, "meta.lstm.bn_momentum", a.bn_momentum);
  a.bn_epsilon = take_scalar(c, "meta.lstm.bn_epsilon", a.bn_epsilon);

  LstmModel m = build(a, 0);
  take_bn(c, "bn_input", m.bn_input);
  auto take_lstm = [&](const std::string& name, nn::LstmLayer<T>& l, std::size_t in,
                       std::size_t u) {
    l.w_input = take_tensor<T>(c, name + ".w_input", {in, 4 * u});
    l.w_recurrent = take_tensor<T>(c, name + ".w_recurrent", {u, 4 * u});
    l.bias = take_tensor<T>(c, name + ".bias", {4 * u});
  };
  take_lstm("lstm1", m.lstm1, a.input_dim, a.lstm1);
  take_bn(c, "bn1", m.bn1);
  take_lstm("lstm2", m.lstm2, a.lstm1, a.lstm2);
  take_bn(c, "bn2", m.bn2);
  m.fc1.weight = take_tensor<T>(c, "fc1.weight", {a.lstm2, a.dense});
  m.fc1.bias = take_tensor<T>(c, "fc1.bias", {a.dense});
  m.fc2.weight = take_tensor<T>(c, "fc2.weight", {a.dense, a.classes});
  m.fc2.bias = take_tensor<T>(c, "fc2.bias", {a.classes});
  return m;
}

bool is_lstm_checkpoint(const io::Checkpoint& checkpoint) {
  return checkpoint.find("lstm1.w_input") != nullptr;
}

template class LstmModel<float>;
template class LstmModel<double>;

}  // namespace painseq::models
