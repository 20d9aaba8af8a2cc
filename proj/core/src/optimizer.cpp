// Copyright 2026 The cfmea Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cfmea/optimizer.hpp"

#include <cmath>

#include "cfmea/error.hpp"

namespace cfmea {

AdamState AdamState::create(const DenseNetwork& net, double learning_rate_) {
  AdamState state;
  state.first_moment = GradientSet::zeros_like(net);
  state.second_moment = GradientSet::zeros_like(net);
  state.learning_rate = learning_rate_;
  return state;
}

void DpConfig::validate() const {
  if (!(l2_norm_clip > 0.0)) throw ValueError("DpConfig: l2_norm_clip must be > 0");
  if (noise_multiplier < 0.0) throw ValueError("DpConfig: noise_multiplier must be >= 0");
}

GradientSet clip_gradient(const GradientSet& grad, double l2_norm_clip) {
  if (!(l2_norm_clip > 0.0)) throw ValueError("clip_gradient: clip bound must be > 0");
  if (!grad.all_finite()) throw ValueError("clip_gradient: non-finite gradient entries");
  const double norm = grad.global_norm();
  GradientSet out = grad;
  if (norm > l2_norm_clip) out.scale(l2_norm_clip / norm);
  return out;
}

GradientSet dp_aggregate(const std::vector<GradientSet>& per_example, const DpConfig& dp,
                         RandomEngine& noise_rng) {
  if (per_example.empty()) throw ValueError("dp_aggregate: empty per-example gradient list");
  dp.validate();
  GradientSet acc = clip_gradient(per_example.front(), dp.l2_norm_clip);
  for (std::size_t i = 1; i < per_example.size(); ++i) {
    acc.add(clip_gradient(per_example[i], dp.l2_norm_clip));
  }
  if (dp.noise_multiplier > 0.0) {
    const double stddev = dp.noise_multiplier * dp.l2_norm_clip;
    for (LayerGradient& layer : acc.layers) {
      for (double& w : layer.weights.data) w += noise_rng.normal(0.0, stddev);
      for (double& b : layer.biases) b += noise_rng.normal(0.0, stddev);
    }
  }
  acc.scale(1.0 / static_cast<double>(per_example.size()));
  return acc;
}

void adam_step(AdamState& state, DenseNetwork& net, const GradientSet& grad) {
  if (grad.layers.size() != net.layers.size()) {
    throw ShapeError("adam_step: gradient layer count differs from network");
  }
  state.step += 1;
  const double bias1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double bias2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (std::size_t k = 0; k < net.layers.size(); ++k) {
    DenseLayer& layer = net.layers[k];
    const LayerGradient& g = grad.layers[k];
    LayerGradient& m = state.first_moment.layers[k];
    LayerGradient& v = state.second_moment.layers[k];
    if (g.weights.rows != layer.weights.rows || g.weights.cols != layer.weights.cols) {
      throw ShapeError("adam_step: weight gradient shape mismatch at layer " + std::to_string(k));
    }
    for (std::size_t i = 0; i < layer.weights.data.size(); ++i) {
      const double gi = g.weights.data[i];
      m.weights.data[i] = state.beta1 * m.weights.data[i] + (1.0 - state.beta1) * gi;
      v.weights.data[i] = state.beta2 * v.weights.data[i] + (1.0 - state.beta2) * gi * gi;
      const double mhat = m.weights.data[i] / bias1;
      const double vhat = v.weights.data[i] / bias2;
      layer.weights.data[i] -= state.learning_rate * mhat / (std::sqrt(vhat) + state.epsilon_hat);
    }
    for (std::size_t i = 0; i < layer.biases.size(); ++i) {
      const double gi = g.biases[i];
      m.biases[i] = state.beta1 * m.biases[i] + (1.0 - state.beta1) * gi;
      v.biases[i] = state.beta2 * v.biases[i] + (1.0 - state.beta2) * gi * gi;
      const double mhat = m.biases[i] / bias1;
      const double vhat = v.biases[i] / bias2;
      layer.biases[i] -= state.learning_rate * mhat / (std::sqrt(vhat) + state.epsilon_hat);
    }
  }
}

void dp_adam_step(AdamState& state, DenseNetwork& net,
                  const std::vector<GradientSet>& per_example, const DpConfig& dp,
                  RandomEngine& noise_rng) {
  adam_step(state, net, dp_aggregate(per_example, dp, noise_rng));
}

}  // namespace cfmea
