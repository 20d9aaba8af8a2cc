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

// Test-only oracles, kept independent of the library's implementation paths.

#ifndef CFMEA_TESTS_ORACLES_HPP_
#define CFMEA_TESTS_ORACLES_HPP_

#include <cmath>
#include <utility>

#include "cfmea/network.hpp"

namespace cfmea::testing {

/// Central finite differences over every parameter of the network.
/// loss_fn is any deterministic map DenseNetwork -> double.
template <class LossFn>
GradientSet finite_difference_gradient(DenseNetwork net, LossFn&& loss_fn, double step = 1e-5) {
  GradientSet grad = GradientSet::zeros_like(net);
  for (std::size_t k = 0; k < net.layers.size(); ++k) {
    for (std::size_t i = 0; i < net.layers[k].weights.data.size(); ++i) {
      double& w = net.layers[k].weights.data[i];
      const double orig = w;
      w = orig + step;
      const double up = loss_fn(net);
      w = orig - step;
      const double down = loss_fn(net);
      w = orig;
      grad.layers[k].weights.data[i] = (up - down) / (2.0 * step);
    }
    for (std::size_t i = 0; i < net.layers[k].biases.size(); ++i) {
      double& b = net.layers[k].biases[i];
      const double orig = b;
      b = orig + step;
      const double up = loss_fn(net);
      b = orig - step;
      const double down = loss_fn(net);
      b = orig;
      grad.layers[k].biases[i] = (up - down) / (2.0 * step);
    }
  }
  return grad;
}

/// Worst relative error between two gradient sets; tiny entries fall back to
/// an absolute comparison so near-zero gradients do not blow the ratio up.
inline double max_gradient_error(const GradientSet& analytic, const GradientSet& reference,
                                 double absolute_floor = 1e-7) {
  double worst = 0.0;
  auto compare = [&](double a, double f) {
    const double diff = std::abs(a - f);
    if (diff <= absolute_floor) return;
    worst = std::max(worst, diff / std::max({std::abs(a), std::abs(f), 1e-12}));
  };
  for (std::size_t k = 0; k < analytic.layers.size(); ++k) {
    for (std::size_t i = 0; i < analytic.layers[k].weights.data.size(); ++i) {
      compare(analytic.layers[k].weights.data[i], reference.layers[k].weights.data[i]);
    }
    for (std::size_t i = 0; i < analytic.layers[k].biases.size(); ++i) {
      compare(analytic.layers[k].biases[i], reference.layers[k].biases[i]);
    }
  }
  return worst;
}

/// Standard normal CDF by Simpson quadrature of the density in long double;
/// a deliberately separate route from the library's erf-based form.
inline double normal_cdf_quadrature(double x) {
  const long double pi = 3.14159265358979323846264338327950288L;
  const long double inv_norm = 1.0L / std::sqrt(2.0L * pi);
  auto pdf = [&](long double t) { return inv_norm * std::exp(-0.5L * t * t); };
  const int n = 20000;  // even
  const long double a = 0.0L, b = x;
  const long double h = (b - a) / n;
  long double sum = pdf(a) + pdf(b);
  for (int i = 1; i < n; ++i) sum += pdf(a + h * i) * (i % 2 == 1 ? 4.0L : 2.0L);
  return static_cast<double>(0.5L + sum * h / 3.0L);
}

}  // namespace cfmea::testing

#endif  // CFMEA_TESTS_ORACLES_HPP_
