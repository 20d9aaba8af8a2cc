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

#ifndef CFMEA_EXTRACTION_HPP_
#define CFMEA_EXTRACTION_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "cfmea/countergan.hpp"
#include "cfmea/network.hpp"
#include "cfmea/optimizer.hpp"

namespace cfmea {

/// What one round of oracle access yields: random queries, the target's
/// probabilities on them, counterfactuals, and the target's probabilities on
/// the counterfactuals.
struct OracleBundle {
  Matrix queries;
  Matrix query_probs;
  Matrix cfs;
  Matrix cf_probs;
};

struct AttackConfig {
  std::size_t n_queries = 1000;
  double alpha = 0.5;        // hard-label weight
  double temperature = 2.0;  // soft-target temperature
  int epochs = 300;
  int batch_size = 128;
  /// Unset: tuned over learning_rate_grid by final attack-set loss.
  std::optional<double> learning_rate;
  std::vector<double> learning_rate_grid = {0.001, 0.01};
  std::uint64_t seed = 0;
  /// DP-trained surrogate; off by default.
  std::optional<DpConfig> dp;
};

/// Fixed 5-layer threat architecture: hidden 32, 64, 128, 64 (relu) and a
/// softmax output.
struct SurrogateSpec {
  std::vector<std::size_t> hidden = {32, 64, 128, 64};
};

OracleBundle query_oracle(const DenseNetwork& target, const GeneratorNet& explainer,
                          std::size_t n, RandomEngine& rng);

struct AttackSet {
  Matrix inputs;         // 2n x d: queries stacked over counterfactuals
  Matrix teacher_probs;  // oracle probabilities for each input row
  std::vector<int> hard_labels;
};

AttackSet build_attack_set(const OracleBundle& bundle);

/// alpha * CE(softmax(logits), hard_labels)
///   + (1 - alpha) * T^2 * KL(soften(teacher, T) || softmax(logits / T)),
/// where soften renormalizes teacher^(1/T). alpha = 1 is exactly
/// cross-entropy.
double kd_loss(const Matrix& student_logits, const Matrix& teacher_probs,
               const std::vector<int>& hard_labels, double alpha, double temperature);

/// Gradient of kd_loss w.r.t. the student logits (mean-normalized).
Matrix kd_loss_grad(const Matrix& student_logits, const Matrix& teacher_probs,
                    const std::vector<int>& hard_labels, double alpha, double temperature);

/// Queries the oracle, assembles the attack set, and distills a surrogate.
DenseNetwork run_attack(const DenseNetwork& target, const GeneratorNet& explainer,
                        const AttackConfig& cfg, const SurrogateSpec& spec = {});

/// Fraction of rows where both models predict the same class.
double agreement(const DenseNetwork& a, const DenseNetwork& b, const Matrix& test_features);

}  // namespace cfmea

#endif  // CFMEA_EXTRACTION_HPP_
