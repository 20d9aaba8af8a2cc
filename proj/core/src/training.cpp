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

#include "cfmea/training.hpp"

namespace cfmea {

namespace {

struct CrossEntropyPolicy {
  const std::vector<int>& labels;

  bool from_logits() const { return true; }

  std::vector<int> batch_labels(const std::vector<std::size_t>& idx) const {
    std::vector<int> out(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) out[i] = labels[idx[i]];
    return out;
  }

  double loss(const ForwardResult& fwd, const std::vector<std::size_t>& idx) const {
    return cross_entropy(fwd.outputs(), batch_labels(idx));
  }

  Matrix batch_grad(const ForwardResult& fwd, const std::vector<std::size_t>& idx) const {
    return cross_entropy_logit_grad(fwd.outputs(), batch_labels(idx));
  }

  Matrix row_grads(const ForwardResult& fwd, const std::vector<std::size_t>& idx) const {
    const Matrix& outputs = fwd.outputs();
    const std::vector<int> y = batch_labels(idx);
    Matrix grads(outputs.rows, outputs.cols);
    for (std::size_t r = 0; r < outputs.rows; ++r) {
      for (std::size_t j = 0; j < outputs.cols; ++j) {
        const double onehot = static_cast<std::size_t>(y[r]) == j ? 1.0 : 0.0;
        grads(r, j) = outputs(r, j) - onehot;
      }
    }
    return grads;
  }
};

struct SquaredErrorPolicy {
  const Matrix& targets;

  bool from_logits() const { return false; }

  double loss(const ForwardResult& fwd, const std::vector<std::size_t>& idx) const {
    const Matrix& outputs = fwd.outputs();
    double sum = 0.0;
    for (std::size_t r = 0; r < outputs.rows; ++r) {
      auto t = targets.row(idx[r]);
      auto o = outputs.row(r);
      for (std::size_t j = 0; j < outputs.cols; ++j) {
        const double d = o[j] - t[j];
        sum += d * d;
      }
    }
    return sum / static_cast<double>(outputs.rows);
  }

  Matrix batch_grad(const ForwardResult& fwd, const std::vector<std::size_t>& idx) const {
    Matrix grad = row_grads(fwd, idx);
    scale_inplace(grad, 1.0 / static_cast<double>(fwd.outputs().rows));
    return grad;
  }

  Matrix row_grads(const ForwardResult& fwd, const std::vector<std::size_t>& idx) const {
    const Matrix& outputs = fwd.outputs();
    Matrix grad(outputs.rows, outputs.cols);
    for (std::size_t r = 0; r < outputs.rows; ++r) {
      auto t = targets.row(idx[r]);
      auto o = outputs.row(r);
      auto g = grad.row(r);
      for (std::size_t j = 0; j < outputs.cols; ++j) g[j] = 2.0 * (o[j] - t[j]);
    }
    return grad;
  }
};

}  // namespace

TrainSummary train_classifier(DenseNetwork& net, const Matrix& x, const std::vector<int>& labels,
                              const TrainConfig& cfg, const RandomEngine& rng) {
  if (labels.size() != x.rows) throw ShapeError("train_classifier: label count mismatch");
  return detail::train_loop(net, x, CrossEntropyPolicy{labels}, cfg, rng);
}

TrainSummary train_reconstruction(DenseNetwork& net, const Matrix& x, const Matrix& targets,
                                  const TrainConfig& cfg, const RandomEngine& rng) {
  if (targets.rows != x.rows) throw ShapeError("train_reconstruction: target row mismatch");
  return detail::train_loop(net, x, SquaredErrorPolicy{targets}, cfg, rng);
}

}  // namespace cfmea
