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

#include "cfmea/network.hpp"

#include <cmath>
#include <string>

#include "cfmea/error.hpp"

namespace cfmea {

DenseNetwork::DenseNetwork(std::size_t input_dim_, std::vector<DenseLayer> layers_)
    : input_dim(input_dim_), layers(std::move(layers_)) {
  if (layers.empty()) throw ShapeError("DenseNetwork: no layers");
  std::size_t expected = input_dim;
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const DenseLayer& layer = layers[k];
    if (layer.fan_in() != expected) {
      throw ShapeError("DenseNetwork: layer " + std::to_string(k) + " fan_in " +
                       std::to_string(layer.fan_in()) + " does not chain (expected " +
                       std::to_string(expected) + ")");
    }
    if (layer.biases.size() != layer.fan_out()) {
      throw ShapeError("DenseNetwork: layer " + std::to_string(k) + " bias length mismatch");
    }
    if (layer.activation == Activation::softmax && k + 1 != layers.size()) {
      throw ShapeError("DenseNetwork: softmax allowed only on the final layer");
    }
    expected = layer.fan_out();
  }
}

std::size_t DenseNetwork::parameter_count() const {
  std::size_t n = 0;
  for (const DenseLayer& layer : layers) n += layer.weights.size() + layer.biases.size();
  return n;
}

namespace {

DenseLayer init_layer(std::size_t fan_in, std::size_t fan_out, Activation act,
                      RandomEngine& rng) {
  DenseLayer layer;
  layer.weights = Matrix(fan_in, fan_out);
  layer.biases.assign(fan_out, 0.0);
  layer.activation = act;
  const bool he = act == Activation::relu || act == Activation::gelu;
  const double limit = he ? std::sqrt(6.0 / static_cast<double>(fan_in))
                          : std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (double& w : layer.weights.data) w = rng.uniform(-limit, limit);
  return layer;
}

}  // namespace

DenseNetwork make_mlp(std::size_t input_dim, const std::vector<std::size_t>& hidden_widths,
                      Activation hidden_act, std::size_t output_dim, Activation output_act,
                      RandomEngine& rng) {
  std::vector<DenseLayer> layers;
  layers.reserve(hidden_widths.size() + 1);
  std::size_t fan_in = input_dim;
  for (std::size_t width : hidden_widths) {
    layers.push_back(init_layer(fan_in, width, hidden_act, rng));
    fan_in = width;
  }
  layers.push_back(init_layer(fan_in, output_dim, output_act, rng));
  return DenseNetwork(input_dim, std::move(layers));
}

GradientSet GradientSet::zeros_like(const DenseNetwork& net) {
  GradientSet g;
  g.layers.reserve(net.layers.size());
  for (const DenseLayer& layer : net.layers) {
    g.layers.push_back({Matrix(layer.fan_in(), layer.fan_out()),
                        std::vector<double>(layer.fan_out(), 0.0)});
  }
  return g;
}

void GradientSet::add(const GradientSet& other) {
  if (layers.size() != other.layers.size()) throw ShapeError("GradientSet::add: layer counts");
  for (std::size_t k = 0; k < layers.size(); ++k) {
    add_inplace(layers[k].weights, other.layers[k].weights);
    for (std::size_t j = 0; j < layers[k].biases.size(); ++j) {
      layers[k].biases[j] += other.layers[k].biases[j];
    }
  }
}

void GradientSet::scale(double factor) {
  for (LayerGradient& layer : layers) {
    scale_inplace(layer.weights, factor);
    for (double& b : layer.biases) b *= factor;
  }
}

double GradientSet::squared_norm() const {
  double sum = 0.0;
  for (const LayerGradient& layer : layers) {
    for (double w : layer.weights.data) sum += w * w;
    for (double b : layer.biases) sum += b * b;
  }
  return sum;
}

double GradientSet::global_norm() const { return std::sqrt(squared_norm()); }

bool GradientSet::all_finite() const {
  for (const LayerGradient& layer : layers) {
    if (!layer.weights.all_finite()) return false;
    for (double b : layer.biases) {
      if (!std::isfinite(b)) return false;
    }
  }
  return true;
}

GradientSet mean_of(const std::vector<GradientSet>& grads) {
  if (grads.empty()) throw ValueError("mean_of: empty gradient list");
  GradientSet acc = grads.front();
  for (std::size_t i = 1; i < grads.size(); ++i) acc.add(grads[i]);
  acc.scale(1.0 / static_cast<double>(grads.size()));
  return acc;
}

ForwardResult ForwardResult::row_slice(std::size_t r) const {
  ForwardResult out;
  out.post.reserve(post.size());
  out.pre.reserve(pre.size());
  for (const Matrix& m : post) out.post.push_back(m.row_matrix(r));
  for (const Matrix& m : pre) out.pre.push_back(m.row_matrix(r));
  return out;
}

ForwardResult forward(const DenseNetwork& net, const Matrix& batch) {
  if (batch.cols != net.input_dim) {
    throw ShapeError("forward: batch has " + std::to_string(batch.cols) +
                     " columns, network expects " + std::to_string(net.input_dim));
  }
  ForwardResult fwd;
  fwd.post.reserve(net.layers.size() + 1);
  fwd.pre.reserve(net.layers.size());
  fwd.post.push_back(batch);
  for (const DenseLayer& layer : net.layers) {
    Matrix z = matmul(fwd.post.back(), layer.weights);
    for (std::size_t r = 0; r < z.rows; ++r) {
      auto zr = z.row(r);
      for (std::size_t j = 0; j < z.cols; ++j) zr[j] += layer.biases[j];
    }
    fwd.post.push_back(apply_activation(layer.activation, z));
    fwd.pre.push_back(std::move(z));
  }
  if (!fwd.post.back().all_finite()) throw ValueError("forward: non-finite network output");
  return fwd;
}

Matrix output_of(const DenseNetwork& net, const Matrix& batch) {
  return forward(net, batch).outputs();
}

namespace {

struct BackpropOut {
  GradientSet grads;
  Matrix input_grad;
};

BackpropOut backprop(const DenseNetwork& net, const ForwardResult& fwd, const Matrix& output_grad,
                     bool from_logits, bool want_input_grad) {
  const std::size_t n_layers = net.layers.size();
  const Matrix& out = fwd.outputs();
  if (output_grad.rows != out.rows || output_grad.cols != out.cols) {
    throw ShapeError("backward: output_grad shape does not match network outputs");
  }
  BackpropOut result;
  result.grads.layers.resize(n_layers);
  Matrix delta = output_grad;
  for (std::size_t k = n_layers; k-- > 0;) {
    const DenseLayer& layer = net.layers[k];
    Matrix dz;
    if (k + 1 == n_layers && from_logits) {
      dz = std::move(delta);
    } else {
      dz = activation_backward(layer.activation, fwd.pre[k], fwd.post[k + 1], delta);
    }
    result.grads.layers[k].weights = matmul_at_b(fwd.post[k], dz);
    std::vector<double>& db = result.grads.layers[k].biases;
    db.assign(layer.fan_out(), 0.0);
    for (std::size_t r = 0; r < dz.rows; ++r) {
      auto dzr = dz.row(r);
      for (std::size_t j = 0; j < dz.cols; ++j) db[j] += dzr[j];
    }
    if (k > 0 || want_input_grad) delta = matmul_a_bt(dz, layer.weights);
  }
  if (want_input_grad) result.input_grad = std::move(delta);
  return result;
}

}  // namespace

GradientSet backward(const DenseNetwork& net, const ForwardResult& fwd,
                     const Matrix& output_grad) {
  return backprop(net, fwd, output_grad, /*from_logits=*/false, /*want_input_grad=*/false).grads;
}

GradientSet backward_from_logits(const DenseNetwork& net, const ForwardResult& fwd,
                                 const Matrix& logit_grad) {
  return backprop(net, fwd, logit_grad, /*from_logits=*/true, /*want_input_grad=*/false).grads;
}

Matrix input_gradient(const DenseNetwork& net, const ForwardResult& fwd, const Matrix& output_grad,
                      bool from_logits) {
  return backprop(net, fwd, output_grad, from_logits, /*want_input_grad=*/true).input_grad;
}

std::vector<GradientSet> per_example_gradients(const DenseNetwork& net, const Matrix& batch,
                                               const std::vector<int>& labels) {
  if (batch.rows == 0) throw ValueError("per_example_gradients: empty batch");
  if (labels.size() != batch.rows) {
    throw ShapeError("per_example_gradients: label count differs from batch rows");
  }
  ForwardResult fwd = forward(net, batch);
  const Matrix& probs = fwd.outputs();
  Matrix row_grads(probs.rows, probs.cols);
  for (std::size_t r = 0; r < probs.rows; ++r) {
    const int label = labels[r];
    if (label < 0 || static_cast<std::size_t>(label) >= probs.cols) {
      throw ValueError("per_example_gradients: label out of range at row " + std::to_string(r));
    }
    for (std::size_t j = 0; j < probs.cols; ++j) {
      row_grads(r, j) = probs(r, j) - (static_cast<std::size_t>(label) == j ? 1.0 : 0.0);
    }
  }
  return per_example_gradients(net, fwd, row_grads, /*from_logits=*/true);
}

std::vector<GradientSet> per_example_gradients(const DenseNetwork& net, const ForwardResult& fwd,
                                               const Matrix& row_grads, bool from_logits) {
  const std::size_t n = fwd.outputs().rows;
  if (n == 0) throw ValueError("per_example_gradients: empty batch");
  if (row_grads.rows != n) {
    throw ShapeError("per_example_gradients: row_grads rows differ from batch rows");
  }
  std::vector<GradientSet> out;
  out.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    ForwardResult row_fwd = fwd.row_slice(r);
    out.push_back(
        backprop(net, row_fwd, row_grads.row_matrix(r), from_logits, /*want_input_grad=*/false)
            .grads);
  }
  return out;
}

double cross_entropy(const Matrix& probs, const std::vector<int>& labels) {
  if (probs.rows == 0) throw ValueError("cross_entropy: empty batch");
  if (labels.size() != probs.rows) throw ShapeError("cross_entropy: label count mismatch");
  double sum = 0.0;
  for (std::size_t r = 0; r < probs.rows; ++r) {
    const int label = labels[r];
    if (label < 0 || static_cast<std::size_t>(label) >= probs.cols) {
      throw ValueError("cross_entropy: label out of class range at row " + std::to_string(r));
    }
    sum += -std::log(std::max(probs(r, static_cast<std::size_t>(label)), 1e-12));
  }
  return sum / static_cast<double>(probs.rows);
}

Matrix cross_entropy_logit_grad(const Matrix& probs, const std::vector<int>& labels) {
  if (labels.size() != probs.rows) throw ShapeError("cross_entropy_logit_grad: label count");
  Matrix grad(probs.rows, probs.cols);
  const double inv_batch = 1.0 / static_cast<double>(probs.rows);
  for (std::size_t r = 0; r < probs.rows; ++r) {
    for (std::size_t j = 0; j < probs.cols; ++j) {
      const double onehot = static_cast<std::size_t>(labels[r]) == j ? 1.0 : 0.0;
      grad(r, j) = (probs(r, j) - onehot) * inv_batch;
    }
  }
  return grad;
}

std::vector<int> argmax_rows(const Matrix& m) {
  std::vector<int> out(m.rows, 0);
  for (std::size_t r = 0; r < m.rows; ++r) {
    auto row = m.row(r);
    std::size_t best = 0;
    for (std::size_t j = 1; j < m.cols; ++j) {
      if (row[j] > row[best]) best = j;  // ties keep the lower index
    }
    out[r] = static_cast<int>(best);
  }
  return out;
}

std::vector<int> predict_class(const DenseNetwork& net, const Matrix& batch) {
  return argmax_rows(output_of(net, batch));
}

}  // namespace cfmea
