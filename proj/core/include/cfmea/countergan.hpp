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

#ifndef CFMEA_COUNTERGAN_HPP_
#define CFMEA_COUNTERGAN_HPP_

#include <optional>

#include "cfmea/network.hpp"
#include "cfmea/optimizer.hpp"

namespace cfmea {

/// Residual counterfactual generator: x_hat = x + delta_scale * net(x), where
/// the tanh output bounds every residual entry by delta_scale.
struct GeneratorNet {
  DenseNetwork net;
  double delta_scale = 2.0;
};

/// Realism discriminator with a single sigmoid output in (0, 1).
struct DiscriminatorNet {
  DenseNetwork net;
};

struct ExplainerConfig {
  /// Counterfactual target class. Unset means "flip": the class opposite to
  /// the classifier's prediction on each input.
  std::optional<int> target_class;
  int epochs = 200;
  int batch_size = 128;
  double learning_rate = 0.005;       // generator
  double disc_learning_rate = 0.001;  // discriminator, never noised
  double w_adv = 1.0;
  double w_clf = 1.0;
  double w_prox = 0.1;
  double delta_scale = 2.0;
  std::optional<DpConfig> dp;  // applied to generator updates only
};

/// Hidden widths 64, 32, 64 (relu), output width dim (tanh).
GeneratorNet make_generator(std::size_t dim, double delta_scale, RandomEngine& rng);

/// Hidden widths 128, 128, 64 (relu), single sigmoid output.
DiscriminatorNet make_discriminator(std::size_t dim, RandomEngine& rng);

Matrix generate_cf(const GeneratorNet& gen, const Matrix& x);

struct ExplainerPair {
  GeneratorNet generator;
  DiscriminatorNet discriminator;
  std::vector<double> generator_loss;      // per epoch
  std::vector<double> discriminator_loss;  // per epoch
};

/// Alternating GAN training against a fixed classifier. The discriminator
/// separates real rows from generated counterfactuals under binary
/// cross-entropy; the generator minimizes
///   w_adv * BCE(D(x_hat), 1) + w_clf * CE(f(x_hat), t) + w_prox * mean |x_hat - x|_1.
/// With cfg.dp set, generator updates use per-example clipping plus Gaussian
/// noise; a zero noise multiplier with a non-binding clip reproduces the
/// non-private trajectory bitwise for the same seed.
ExplainerPair train_countergan(const DenseNetwork& classifier, const Matrix& train_rows,
                               const ExplainerConfig& cfg, const RandomEngine& rng);

struct Explanation {
  Matrix cfs;
  Matrix cf_probs;
};

/// The oracle-side bundle a query receives: counterfactuals plus the
/// classifier's probabilities on them.
Explanation explain_batch(const GeneratorNet& gen, const DenseNetwork& classifier,
                          const Matrix& queries);

}  // namespace cfmea

#endif  // CFMEA_COUNTERGAN_HPP_
