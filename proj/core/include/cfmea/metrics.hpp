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

#ifndef CFMEA_METRICS_HPP_
#define CFMEA_METRICS_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "cfmea/countergan.hpp"
#include "cfmea/dataset.hpp"
#include "cfmea/network.hpp"

namespace cfmea {

struct ClassificationReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Standard binary metrics with class 1 positive; precision/recall are 0
/// when their denominator is 0.
ClassificationReport classification_report(const DenseNetwork& model, const Dataset& test);

/// Per-row change in the classifier's class-t probability from x to x_hat.
std::vector<double> prediction_gain(const DenseNetwork& classifier, const Matrix& x,
                                    const Matrix& x_hat, int target_class);

/// Mean gain over points whose predicted class differs from the target.
/// Unset target_class means "flip": each point's target is the opposite of
/// its prediction, so every point counts.
double mean_prediction_gain(const DenseNetwork& classifier, const GeneratorNet& gen,
                            const Matrix& points, std::optional<int> target_class = {});

/// Bottleneck autoencoder d -> 16 -> 8 -> 16 -> d (relu hidden, identity
/// output) trained on the standardized training rows.
DenseNetwork train_autoencoder(const Matrix& rows, int epochs, double learning_rate,
                               std::uint64_t seed);

/// Mean squared L2 reconstruction error; lower is more in-distribution.
double realism(const DenseNetwork& autoencoder, const Matrix& points);

}  // namespace cfmea

#endif  // CFMEA_METRICS_HPP_
