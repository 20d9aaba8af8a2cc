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

#include "cfmea/activation.hpp"

#include <algorithm>
#include <cmath>

#include "cfmea/error.hpp"

namespace cfmea {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
}  // namespace

std::string_view activation_name(Activation act) {
  switch (act) {
    case Activation::identity: return "identity";
    case Activation::relu: return "relu";
    case Activation::gelu: return "gelu";
    case Activation::tanh: return "tanh";
    case Activation::sigmoid: return "sigmoid";
    case Activation::softmax: return "softmax";
  }
  throw ValueError("unknown activation tag");
}

Activation activation_from_name(std::string_view name) {
  if (name == "identity") return Activation::identity;
  if (name == "relu") return Activation::relu;
  if (name == "gelu") return Activation::gelu;
  if (name == "tanh") return Activation::tanh;
  if (name == "sigmoid") return Activation::sigmoid;
  if (name == "softmax") return Activation::softmax;
  throw ValueError("unknown activation name: " + std::string(name));
}

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x * kInvSqrt2)); }

double gelu_derivative(double x) {
  const double phi_cdf = 0.5 * (1.0 + std::erf(x * kInvSqrt2));
  const double phi_pdf = kInvSqrt2Pi * std::exp(-0.5 * x * x);
  return phi_cdf + x * phi_pdf;
}

double sigmoid(double x) {
  // Split on sign to avoid overflow in exp.
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Matrix apply_activation(Activation act, const Matrix& z) {
  Matrix out(z.rows, z.cols);
  switch (act) {
    case Activation::identity:
      out.data = z.data;
      break;
    case Activation::relu:
      for (std::size_t i = 0; i < z.data.size(); ++i) out.data[i] = std::max(0.0, z.data[i]);
      break;
    case Activation::gelu:
      for (std::size_t i = 0; i < z.data.size(); ++i) out.data[i] = gelu(z.data[i]);
      break;
    case Activation::tanh:
      for (std::size_t i = 0; i < z.data.size(); ++i) out.data[i] = std::tanh(z.data[i]);
      break;
    case Activation::sigmoid:
      for (std::size_t i = 0; i < z.data.size(); ++i) out.data[i] = sigmoid(z.data[i]);
      break;
    case Activation::softmax:
      for (std::size_t r = 0; r < z.rows; ++r) {
        auto zr = z.row(r);
        auto or_ = out.row(r);
        double zmax = *std::max_element(zr.begin(), zr.end());
        double sum = 0.0;
        for (std::size_t j = 0; j < z.cols; ++j) {
          or_[j] = std::exp(zr[j] - zmax);
          sum += or_[j];
        }
        for (std::size_t j = 0; j < z.cols; ++j) or_[j] /= sum;
      }
      break;
  }
  return out;
}

Matrix activation_backward(Activation act, const Matrix& pre, const Matrix& post,
                           const Matrix& grad) {
  if (grad.rows != post.rows || grad.cols != post.cols) {
    throw ShapeError("activation_backward: gradient shape differs from activation shape");
  }
  Matrix out(grad.rows, grad.cols);
  switch (act) {
    case Activation::identity:
      out.data = grad.data;
      break;
    case Activation::relu:
      for (std::size_t i = 0; i < grad.data.size(); ++i) {
        out.data[i] = pre.data[i] > 0.0 ? grad.data[i] : 0.0;
      }
      break;
    case Activation::gelu:
      for (std::size_t i = 0; i < grad.data.size(); ++i) {
        out.data[i] = grad.data[i] * gelu_derivative(pre.data[i]);
      }
      break;
    case Activation::tanh:
      for (std::size_t i = 0; i < grad.data.size(); ++i) {
        out.data[i] = grad.data[i] * (1.0 - post.data[i] * post.data[i]);
      }
      break;
    case Activation::sigmoid:
      for (std::size_t i = 0; i < grad.data.size(); ++i) {
        out.data[i] = grad.data[i] * post.data[i] * (1.0 - post.data[i]);
      }
      break;
    case Activation::softmax:
      // dz_j = p_j * (g_j - sum_k g_k p_k), row-wise.
      for (std::size_t r = 0; r < grad.rows; ++r) {
        auto p = post.row(r);
        auto g = grad.row(r);
        auto o = out.row(r);
        double dot = 0.0;
        for (std::size_t j = 0; j < grad.cols; ++j) dot += g[j] * p[j];
        for (std::size_t j = 0; j < grad.cols; ++j) o[j] = p[j] * (g[j] - dot);
      }
      break;
  }
  return out;
}

}  // namespace cfmea
