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

#ifndef CFMEA_ACTIVATION_HPP_
#define CFMEA_ACTIVATION_HPP_

#include <string_view>

#include "cfmea/matrix.hpp"

namespace cfmea {

enum class Activation : unsigned char {
  identity = 0,
  relu = 1,
  gelu = 2,
  tanh = 3,
  sigmoid = 4,
  softmax = 5,
};

std::string_view activation_name(Activation act);
Activation activation_from_name(std::string_view name);

/// Exact Gaussian-CDF form x * Phi(x), not the tanh approximation.
double gelu(double x);
double gelu_derivative(double x);
double sigmoid(double x);

/// Applies the activation elementwise; softmax is row-wise with
/// max-subtraction, so each output row sums to 1 and stays positive.
Matrix apply_activation(Activation act, const Matrix& z);

/// Maps dL/d(post-activation) to dL/d(pre-activation). `pre` and `post` are
/// the layer's forward values; softmax uses the full row Jacobian.
Matrix activation_backward(Activation act, const Matrix& pre, const Matrix& post,
                           const Matrix& grad);

}  // namespace cfmea

#endif  // CFMEA_ACTIVATION_HPP_
