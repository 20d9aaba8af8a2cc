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

#ifndef CFMEA_TRAINING_HPP_
#define CFMEA_TRAINING_HPP_

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "cfmea/error.hpp"
#include "cfmea/network.hpp"
#include "cfmea/optimizer.hpp"

namespace cfmea {

struct TrainConfig {
  int epochs = 40;
  int batch_size = 128;
  double learning_rate = 0.001;
  std::optional<DpConfig> dp;  // per-example clipping + Gaussian noise when set
};

struct TrainSummary {
  std::vector<double> epoch_loss;

  double final_loss() const { return epoch_loss.empty() ? 0.0 : epoch_loss.back(); }
};

namespace detail {

inline Matrix gather_rows(const Matrix& source, const std::vector<std::size_t>& idx) {
  Matrix out(idx.size(), source.cols);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    auto src = source.row(idx[i]);
    auto dst = out.row(i);
    std::copy(src.begin(), src.end(), dst.begin());
  }
  return out;
}

/// Minibatch Adam loop shared by every trainer. LossPolicy provides:
///   bool from_logits() const
///   double loss(fwd, idx)        mean loss over the minibatch
///   Matrix batch_grad(fwd, idx)  gradient of that mean loss
///   Matrix row_grads(fwd, idx)   per-example (unaveraged) gradients
/// With cfg.dp set, updates go through dp_adam_step on per-example
/// gradients; the noise stream derives from (rng seed, dp seed).
template <class LossPolicy>
TrainSummary train_loop(DenseNetwork& net, const Matrix& x, LossPolicy&& policy,
                        const TrainConfig& cfg, const RandomEngine& rng) {
  if (x.rows == 0) throw ValueError("train_loop: empty training set");
  AdamState state = AdamState::create(net, cfg.learning_rate);
  RandomEngine shuffle_rng = rng.split("shuffle");
  RandomEngine noise_rng(derive_seed(rng.seed(), "dp-noise", cfg.dp ? cfg.dp->seed : 0));
  const std::size_t batch_size =
      cfg.batch_size > 0 ? static_cast<std::size_t>(cfg.batch_size) : x.rows;

  std::vector<std::size_t> order(x.rows);
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  TrainSummary summary;
  summary.epoch_loss.reserve(static_cast<std::size_t>(cfg.epochs));
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double loss_sum = 0.0;
    for (std::size_t begin = 0; begin < order.size(); begin += batch_size) {
      const std::size_t end = std::min(begin + batch_size, order.size());
      std::vector<std::size_t> idx(order.begin() + begin, order.begin() + end);
      Matrix xb = gather_rows(x, idx);
      ForwardResult fwd = forward(net, xb);
      const double batch_loss = policy.loss(fwd, idx);
      if (!std::isfinite(batch_loss)) {
        throw TrainingError("training diverged (non-finite loss) at epoch " +
                            std::to_string(epoch));
      }
      loss_sum += batch_loss * static_cast<double>(idx.size());
      if (cfg.dp) {
        Matrix rows = policy.row_grads(fwd, idx);
        std::vector<GradientSet> per_example =
            per_example_gradients(net, fwd, rows, policy.from_logits());
        dp_adam_step(state, net, per_example, *cfg.dp, noise_rng);
      } else {
        Matrix grad = policy.batch_grad(fwd, idx);
        GradientSet g = policy.from_logits() ? backward_from_logits(net, fwd, grad)
                                             : backward(net, fwd, grad);
        adam_step(state, net, g);
      }
    }
    summary.epoch_loss.push_back(loss_sum / static_cast<double>(order.size()));
  }
  return summary;
}

}  // namespace detail

/// Softmax classifier under cross-entropy.
TrainSummary train_classifier(DenseNetwork& net, const Matrix& x, const std::vector<int>& labels,
                              const TrainConfig& cfg, const RandomEngine& rng);

/// Squared-error regression / reconstruction (autoencoders use x == targets).
TrainSummary train_reconstruction(DenseNetwork& net, const Matrix& x, const Matrix& targets,
                                  const TrainConfig& cfg, const RandomEngine& rng);

}  // namespace cfmea

#endif  // CFMEA_TRAINING_HPP_
