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

#ifndef CFMEA_OPTIMIZER_HPP_
#define CFMEA_OPTIMIZER_HPP_

#include <cstdint>
#include <vector>

#include "cfmea/network.hpp"
#include "cfmea/rng.hpp"

namespace cfmea {

/// Adaptive-moment optimizer state for one network.
struct AdamState {
  GradientSet first_moment;
  GradientSet second_moment;
  std::int64_t step = 0;
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon_hat = 1e-8;

  static AdamState create(const DenseNetwork& net, double learning_rate);
};

/// Per-example gradient privatization parameters: clip each example's global
/// L2 norm at l2_norm_clip, then add N(0, (noise_multiplier * clip)^2) per
/// coordinate before averaging. noise_multiplier = 0 disables the noise and
/// draws nothing from the engine.
struct DpConfig {
  double l2_norm_clip = 1.0;
  double noise_multiplier = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// g * min(1, clip / ||g||_2) over the global norm of all parameters jointly.
GradientSet clip_gradient(const GradientSet& grad, double l2_norm_clip);

/// (sum_i clip(g_i, C) + N(0, sigma^2 C^2 I)) / B.
GradientSet dp_aggregate(const std::vector<GradientSet>& per_example, const DpConfig& dp,
                         RandomEngine& noise_rng);

/// Standard bias-corrected adaptive-moment update; increments the step count.
void adam_step(AdamState& state, DenseNetwork& net, const GradientSet& grad);

/// dp_aggregate followed by adam_step.
void dp_adam_step(AdamState& state, DenseNetwork& net,
                  const std::vector<GradientSet>& per_example, const DpConfig& dp,
                  RandomEngine& noise_rng);

}  // namespace cfmea

#endif  // CFMEA_OPTIMIZER_HPP_
