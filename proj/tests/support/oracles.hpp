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

// Scalar reference implementations. Deliberately naive: plain loops over
// std::vector<double>, no Eigen, no library code.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;

inline double sigmoid(double a) { return 1.0 / (1.0 + std::exp(-a)); }

// y[b][o] = act(sum_i x[b][i] w[i][o] + bias[o]); act 0 identity, 1 relu, 2 softmax.
inline Vec dense(const Vec& x, const Vec& w, const Vec& bias, std::size_t batch, std::size_t in,
                 std::size_t out, int act) {
  Vec y(batch * out, 0.0);
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t o = 0; o < out; ++o) {
      double s = bias[o];
      for (std::size_t i = 0; i < in; ++i) s += x[b * in + i] * w[i * out + o];
      y[b * out + o] = act == 1 ? std::max(s, 0.0) : s;
    }
    if (act == 2) {
      double m = y[b * out];
      for (std::size_t o = 1; o < out; ++o) m = std::max(m, y[b * out + o]);
      double z = 0.0;
      for (std::size_t o = 0; o < out; ++o) z += std::exp(y[b * out + o] - m);
      for (std::size_t o = 0; o < out; ++o) y[b * out + o] = std::exp(y[b * out + o] - m) / z;
    }
  }
  return y;
}

// One sequence through an LSTM, step by step. Gate order i, f, g, o.
// w_in is (in x 4u), w_rec (u x 4u), bias 4u. Returns hidden states (time x u).
inline Vec lstm_sequence(const Vec& x, std::size_t time, std::size_t in, std::size_t u,
                         const Vec& w_in, const Vec& w_rec, const Vec& bias) {
  Vec h(u, 0.0), c(u, 0.0), out;
  for (std::size_t t = 0; t < time; ++t) {
    Vec h_new(u), c_new(u);
    for (std::size_t j = 0; j < u; ++j) {
      double a[4];
      for (std::size_t k = 0; k < 4; ++k) {
        const std::size_t col = k * u + j;
        double s = bias[col];
        for (std::size_t i = 0; i < in; ++i) s += x[t * in + i] * w_in[i * 4 * u + col];
        for (std::size_t r = 0; r < u; ++r) s += h[r] * w_rec[r * 4 * u + col];
        a[k] = s;
      }
      const double ig = sigmoid(a[0]), fg = sigmoid(a[1]), gg = std::tanh(a[2]),
                   og = sigmoid(a[3]);
      c_new[j] = fg * c[j] + ig * gg;
      h_new[j] = og * std::tanh(c_new[j]);
    }
    h = h_new;
    c = c_new;
    out.insert(out.end(), h.begin(), h.end());
  }
  return out;
}

// Hand-derived BPTT for units = 1, in = 1, time = 2 with loss r1 h1 + r2 h2.
struct ScalarLstmGrads {
  std::array<double, 4> w_in{}, w_rec{}, bias{};
  std::array<double, 2> x{};
  double h1 = 0.0, h2 = 0.0;
};

inline ScalarLstmGrads scalar_lstm_bptt(const std::array<double, 4>& wi,
                                        const std::array<double, 4>& wh,
                                        const std::array<double, 4>& b, double x1, double x2,
                                        double r1, double r2) {
  // Forward, step 1 (h0 = c0 = 0).
  const double i1 = sigmoid(wi[0] * x1 + b[0]);
  const double f1 = sigmoid(wi[1] * x1 + b[1]);
  const double g1 = std::tanh(wi[2] * x1 + b[2]);
  const double o1 = sigmoid(wi[3] * x1 + b[3]);
  const double c1 = i1 * g1;
  const double h1 = o1 * std::tanh(c1);
  (void)f1;
  // Step 2.
  const double i2 = sigmoid(wi[0] * x2 + wh[0] * h1 + b[0]);
  const double f2 = sigmoid(wi[1] * x2 + wh[1] * h1 + b[1]);
  const double g2 = std::tanh(wi[2] * x2 + wh[2] * h1 + b[2]);
  const double o2 = sigmoid(wi[3] * x2 + wh[3] * h1 + b[3]);
  const double c2 = f2 * c1 + i2 * g2;
  const double h2 = o2 * std::tanh(c2);

  // Backward, step 2.
  const double t2 = std::tanh(c2);
  const double dc2 = r2 * o2 * (1 - t2 * t2);
  const std::array<double, 4> da2 = {dc2 * g2 * i2 * (1 - i2), dc2 * c1 * f2 * (1 - f2),
                                     dc2 * i2 * (1 - g2 * g2), r2 * t2 * o2 * (1 - o2)};
  // Step 1.
  const double dh1 = r1 + wh[0] * da2[0] + wh[1] * da2[1] + wh[2] * da2[2] + wh[3] * da2[3];
  const double t1 = std::tanh(c1);
  const double dc1 = dc2 * f2 + dh1 * o1 * (1 - t1 * t1);
  const std::array<double, 4> da1 = {dc1 * g1 * i1 * (1 - i1), 0.0, dc1 * i1 * (1 - g1 * g1),
                                     dh1 * t1 * o1 * (1 - o1)};

  ScalarLstmGrads g;
  g.h1 = h1;
  g.h2 = h2;
  for (int k = 0; k < 4; ++k) {
    g.w_in[k] = da1[k] * x1 + da2[k] * x2;
    g.w_rec[k] = da2[k] * h1;
    g.bias[k] = da1[k] + da2[k];
    g.x[0] += wi[k] * da1[k];
    g.x[1] += wi[k] * da2[k];
  }
  return g;
}

// Batch-norm train-mode forward over rows (n x f), biased variance.
inline Vec batchnorm(const Vec& x, std::size_t n, std::size_t f, const Vec& gamma,
                     const Vec& beta, double eps) {
  Vec y(n * f);
  for (std::size_t j = 0; j < f; ++j) {
    double mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) mean += x[r * f + j];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t r = 0; r < n; ++r) var += (x[r * f + j] - mean) * (x[r * f + j] - mean);
    var /= static_cast<double>(n);
    for (std::size_t r = 0; r < n; ++r) {
      y[r * f + j] = gamma[j] * (x[r * f + j] - mean) / std::sqrt(var + eps) + beta[j];
    }
  }
  return y;
}

// Mean over rows of -w[y] log p[y].
inline double weighted_ce(const Vec& probs, const std::vector<int>& labels,
                          const std::array<double, 3>& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto y = static_cast<std::size_t>(labels[i]);
    s += -w[y] * std::log(probs[i * 3 + y]);
  }
  return s / static_cast<double>(labels.size());
}

// Adadelta applied to a scalar, one call per step.
struct ScalarAdadelta {
  double rho = 0.95, eps = 1e-6, lr = 1.0;
  double eg2 = 0.0, edx2 = 0.0;
  double step(double x, double g) {
    eg2 = rho * eg2 + (1 - rho) * g * g;
    const double dx = -lr * std::sqrt(edx2 + eps) / std::sqrt(eg2 + eps) * g;
    edx2 = rho * edx2 + (1 - rho) * dx * dx;
    return x + dx;
  }
};

// Cross-correlation with zero padding 1, CHW layout, weight (out, in, 3, 3).
inline Vec conv3x3(const Vec& x, std::size_t cin, std::size_t h, std::size_t w, const Vec& k,
                   const Vec& bias, std::size_t cout) {
  Vec y(cout * h * w);
  for (std::size_t o = 0; o < cout; ++o) {
    for (std::size_t r = 0; r < h; ++r) {
      for (std::size_t c = 0; c < w; ++c) {
        double s = bias[o];
        for (std::size_t i = 0; i < cin; ++i) {
          for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
              const long rr = static_cast<long>(r) + dy;
              const long cc = static_cast<long>(c) + dx;
              if (rr < 0 || cc < 0 || rr >= static_cast<long>(h) || cc >= static_cast<long>(w)) {
                continue;
              }
              s += k[((o * cin + i) * 3 + static_cast<std::size_t>(dy + 1)) * 3 +
                     static_cast<std::size_t>(dx + 1)] *
                   x[(i * h + static_cast<std::size_t>(rr)) * w + static_cast<std::size_t>(cc)];
            }
          }
        }
        y[(o * h + r) * w + c] = s;
      }
    }
  }
  return y;
}

// Tent-kernel form of bilinear sampling at a (clamped) source coordinate.
inline double bilinear_at(const std::vector<double>& plane, std::size_t h, std::size_t w,
                          double sy, double sx) {
  sy = std::clamp(sy, 0.0, static_cast<double>(h - 1));
  sx = std::clamp(sx, 0.0, static_cast<double>(w - 1));
  double s = 0.0;
  for (std::size_t r = 0; r < h; ++r) {
    const double wy = std::max(0.0, 1.0 - std::abs(sy - static_cast<double>(r)));
    if (wy == 0.0) continue;
    for (std::size_t c = 0; c < w; ++c) {
      const double wx = std::max(0.0, 1.0 - std::abs(sx - static_cast<double>(c)));
      s += wy * wx * plane[r * w + c];
    }
  }
  return s;
}

// Count-then-max mode over argmaxes; ties by summed probability, then index.
inline int vote(const std::vector<std::array<double, 3>>& rows) {
  std::map<int, int> count;
  std::array<double, 3> mass{};
  for (const auto& r : rows) {
    int arg = 0;
    for (int k = 0; k < 3; ++k) {
      mass[static_cast<std::size_t>(k)] += r[static_cast<std::size_t>(k)];
      if (r[static_cast<std::size_t>(k)] > r[static_cast<std::size_t>(arg)]) arg = k;
    }
    ++count[arg];
  }
  int best_count = 0;
  for (const auto& [k, n] : count) best_count = std::max(best_count, n);
  std::vector<int> tied;
  for (int k = 0; k < 3; ++k) {
    if (count[k] == best_count) tied.push_back(k);
  }
  int pick = tied.front();
  for (int k : tied) {
    if (mass[static_cast<std::size_t>(k)] > mass[static_cast<std::size_t>(pick)]) pick = k;
  }
  return pick;
}

}  // namespace oracle
