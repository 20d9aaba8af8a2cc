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

#ifndef CFMEA_NETWORK_HPP_
#define CFMEA_NETWORK_HPP_

#include <cstddef>
#include <vector>

#include "cfmea/activation.hpp"
#include "cfmea/matrix.hpp"
#include "cfmea/rng.hpp"

namespace cfmea {

struct DenseLayer {
  Matrix weights;               // fan_in x fan_out
  std::vector<double> biases;   // fan_out
  Activation activation = Activation::identity;

  std::size_t fan_in() const { return weights.rows; }
  std::size_t fan_out() const { return weights.cols; }
};

/// Feedforward stack of dense layers. Construction validates that layer
/// dimensions chain and that softmax only appears on the final layer.
struct DenseNetwork {
  std::size_t input_dim = 0;
  std::vector<DenseLayer> layers;

  DenseNetwork() = default;
  DenseNetwork(std::size_t input_dim, std::vector<DenseLayer> layers);

  std::size_t output_dim() const { return layers.back().fan_out(); }
  std::size_t parameter_count() const;
};

/// Builds an MLP with the given hidden widths. Weights are He-uniform for
/// relu/gelu layers and Glorot-uniform otherwise; biases start at zero.
DenseNetwork make_mlp(std::size_t input_dim, const std::vector<std::size_t>& hidden_widths,
                      Activation hidden_act, std::size_t output_dim, Activation output_act,
                      RandomEngine& rng);

struct LayerGradient {
  Matrix weights;
  std::vector<double> biases;
};

/// Per-layer parameter gradients, shapes mirroring the owning network.
struct GradientSet {
  std::vector<LayerGradient> layers;

  static GradientSet zeros_like(const DenseNetwork& net);
  void add(const GradientSet& other);
  void scale(double factor);
  double squared_norm() const;
  double global_norm() const;
  bool all_finite() const;
};

/// Arithmetic mean of a non-empty list, accumulated in list order.
GradientSet mean_of(const std::vector<GradientSet>& grads);

/// Everything forward() produces: post[0] is the input batch, post.back()
/// the outputs; pre[k] is layer k's pre-activation.
struct ForwardResult {
  std::vector<Matrix> post;
  std::vector<Matrix> pre;

  const Matrix& outputs() const { return post.back(); }
  ForwardResult row_slice(std::size_t r) const;
};

ForwardResult forward(const DenseNetwork& net, const Matrix& batch);

/// Convenience: run forward and keep only the outputs.
Matrix output_of(const DenseNetwork& net, const Matrix& batch);

/// Backpropagates output_grad = dL/d(outputs) to parameter gradients.
/// Normalization is the caller's: if output_grad is the gradient of a
/// mean-over-batch loss, the result is the mean-over-batch gradient.
GradientSet backward(const DenseNetwork& net, const ForwardResult& fwd, const Matrix& output_grad);

/// Same, but output_grad is taken w.r.t. the final pre-activation (logits),
/// for fused softmax/sigmoid + loss gradients.
GradientSet backward_from_logits(const DenseNetwork& net, const ForwardResult& fwd,
                                 const Matrix& logit_grad);

/// dL/d(input batch) under the same conventions as backward().
Matrix input_gradient(const DenseNetwork& net, const ForwardResult& fwd, const Matrix& output_grad,
                      bool from_logits = false);

/// Per-example gradients for a softmax classifier under cross-entropy.
/// Element i equals backward() on the single-row batch {row i}.
std::vector<GradientSet> per_example_gradients(const DenseNetwork& net, const Matrix& batch,
                                               const std::vector<int>& labels);

/// Generic per-example gradients: row i of row_grads is the gradient of
/// example i's own (unaveraged) loss w.r.t. that example's output row.
std::vector<GradientSet> per_example_gradients(const DenseNetwork& net, const ForwardResult& fwd,
                                               const Matrix& row_grads, bool from_logits);

/// Mean of -log p(label); probabilities are clamped at 1e-12 before the log.
double cross_entropy(const Matrix& probs, const std::vector<int>& labels);

/// Gradient of cross_entropy w.r.t. logits, (p - onehot) / batch, for use
/// with backward_from_logits.
Matrix cross_entropy_logit_grad(const Matrix& probs, const std::vector<int>& labels);

/// Argmax per row; ties break toward the lower class index.
std::vector<int> predict_class(const DenseNetwork& net, const Matrix& batch);
std::vector<int> argmax_rows(const Matrix& m);

}  // namespace cfmea

#endif  // CFMEA_NETWORK_HPP_
