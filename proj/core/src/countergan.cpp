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

#include "cfmea/countergan.hpp"

#include <cmath>
#include <string>

#include "cfmea/error.hpp"
#include "cfmea/training.hpp"

namespace cfmea {

GeneratorNet make_generator(std::size_t dim, double delta_scale, RandomEngine& rng) {
  GeneratorNet gen;
  gen.net = make_mlp(dim, {64, 32, 64}, Activation::relu, dim, Activation::tanh, rng);
  gen.delta_scale = delta_scale;
  return gen;
}

DiscriminatorNet make_discriminator(std::size_t dim, RandomEngine& rng) {
  DiscriminatorNet disc;
  disc.net = make_mlp(dim, {128, 128, 64}, Activation::relu, 1, Activation::sigmoid, rng);
  return disc;
}

Matrix generate_cf(const GeneratorNet& gen, const Matrix& x) {
  if (x.cols != gen.net.input_dim) {
    throw ShapeError("generate_cf: input width " + std::to_string(x.cols) +
                     " does not match generator dimension " + std::to_string(gen.net.input_dim));
  }
  Matrix residual = output_of(gen.net, x);
  Matrix out = x;
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    out.data[i] += gen.delta_scale * residual.data[i];
  }
  return out;
}

Explanation explain_batch(const GeneratorNet& gen, const DenseNetwork& classifier,
                          const Matrix& queries) {
  Explanation ex;
  ex.cfs = generate_cf(gen, queries);
  ex.cf_probs = output_of(classifier, ex.cfs);
  return ex;
}

namespace {

double binary_cross_entropy(const Matrix& probs, const std::vector<double>& targets) {
  double sum = 0.0;
  for (std::size_t r = 0; r < probs.rows; ++r) {
    const double p = std::min(std::max(probs(r, 0), 1e-12), 1.0 - 1e-12);
    sum += -(targets[r] * std::log(p) + (1.0 - targets[r]) * std::log(1.0 - p));
  }
  return sum / static_cast<double>(probs.rows);
}

}  // namespace

ExplainerPair train_countergan(const DenseNetwork& classifier, const Matrix& train_rows,
                               const ExplainerConfig& cfg, const RandomEngine& rng) {
  if (train_rows.rows == 0) throw ValueError("train_countergan: empty training set");
  if (train_rows.cols != classifier.input_dim) {
    throw ShapeError("train_countergan: row width differs from classifier input");
  }
  if (cfg.w_adv < 0 || cfg.w_clf < 0 || cfg.w_prox < 0) {
    throw ValueError("train_countergan: loss weights must be >= 0");
  }
  const std::size_t dim = train_rows.cols;
  const std::size_t n_classes = classifier.output_dim();
  if (cfg.target_class &&
      (*cfg.target_class < 0 || static_cast<std::size_t>(*cfg.target_class) >= n_classes)) {
    throw ValueError("train_countergan: target_class out of range");
  }
  if (cfg.dp) cfg.dp->validate();

  RandomEngine init_rng = rng.split("init");
  RandomEngine shuffle_rng = rng.split("shuffle");
  RandomEngine noise_rng(derive_seed(rng.seed(), "dp-noise", cfg.dp ? cfg.dp->seed : 0));

  ExplainerPair pair;
  pair.generator = make_generator(dim, cfg.delta_scale, init_rng);
  pair.discriminator = make_discriminator(dim, init_rng);

  AdamState gen_state = AdamState::create(pair.generator.net, cfg.learning_rate);
  AdamState disc_state = AdamState::create(pair.discriminator.net, cfg.disc_learning_rate);

  // The classifier is frozen, so each row's counterfactual target is fixed:
  // either cfg.target_class or the flip of the prediction on the row.
  std::vector<int> row_target(train_rows.rows, cfg.target_class.value_or(0));
  if (!cfg.target_class) {
    const std::vector<int> predicted = predict_class(classifier, train_rows);
    for (std::size_t i = 0; i < row_target.size(); ++i) {
      row_target[i] = predicted[i] == 0 ? 1 : 0;
    }
  }

  const std::size_t batch_size =
      cfg.batch_size > 0 ? static_cast<std::size_t>(cfg.batch_size) : train_rows.rows;
  std::vector<std::size_t> order(train_rows.rows);
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double gen_loss_sum = 0.0;
    double disc_loss_sum = 0.0;
    for (std::size_t begin = 0; begin < order.size(); begin += batch_size) {
      const std::size_t end = std::min(begin + batch_size, order.size());
      std::vector<std::size_t> idx(order.begin() + begin, order.begin() + end);
      const std::size_t b = idx.size();

      Matrix x = detail::gather_rows(train_rows, idx);
      ForwardResult gen_fwd = forward(pair.generator.net, x);
      Matrix x_hat = x;
      for (std::size_t i = 0; i < x_hat.data.size(); ++i) {
        x_hat.data[i] += pair.generator.delta_scale * gen_fwd.outputs().data[i];
      }
      std::vector<int> wanted(b);
      for (std::size_t i = 0; i < b; ++i) wanted[i] = row_target[idx[i]];

      // Discriminator step on [real; fake] with labels [1; 0].
      {
        Matrix both = vstack(x, x_hat);
        ForwardResult fwd = forward(pair.discriminator.net, both);
        std::vector<double> targets(2 * b, 0.0);
        for (std::size_t i = 0; i < b; ++i) targets[i] = 1.0;
        const double loss = binary_cross_entropy(fwd.outputs(), targets);
        if (!std::isfinite(loss)) {
          throw TrainingError("countergan discriminator diverged at epoch " +
                              std::to_string(epoch));
        }
        disc_loss_sum += loss * static_cast<double>(b);
        // Fused sigmoid + BCE gradient w.r.t. the logit: (p - y) / batch.
        Matrix logit_grad(2 * b, 1);
        for (std::size_t r = 0; r < 2 * b; ++r) {
          logit_grad(r, 0) = (fwd.outputs()(r, 0) - targets[r]) / static_cast<double>(2 * b);
        }
        adam_step(disc_state, pair.discriminator.net,
                  backward_from_logits(pair.discriminator.net, fwd, logit_grad));
      }

      // Generator step against the just-updated discriminator. All three
      // loss terms are differentiated to x_hat per example, then chained
      // through the residual head.
      {
        ForwardResult disc_fwd = forward(pair.discriminator.net, x_hat);
        ForwardResult clf_fwd = forward(classifier, x_hat);

        Matrix disc_logit_grad(b, 1);
        for (std::size_t r = 0; r < b; ++r) {
          disc_logit_grad(r, 0) = cfg.w_adv * (disc_fwd.outputs()(r, 0) - 1.0);
        }
        Matrix clf_logit_grad(b, n_classes);
        for (std::size_t r = 0; r < b; ++r) {
          for (std::size_t j = 0; j < n_classes; ++j) {
            const double onehot = static_cast<std::size_t>(wanted[r]) == j ? 1.0 : 0.0;
            clf_logit_grad(r, j) = cfg.w_clf * (clf_fwd.outputs()(r, j) - onehot);
          }
        }
        Matrix d_xhat = input_gradient(pair.discriminator.net, disc_fwd, disc_logit_grad,
                                       /*from_logits=*/true);
        add_inplace(d_xhat,
                    input_gradient(classifier, clf_fwd, clf_logit_grad, /*from_logits=*/true));
        double prox = 0.0;
        for (std::size_t r = 0; r < b; ++r) {
          for (std::size_t j = 0; j < dim; ++j) {
            const double diff = x_hat(r, j) - x(r, j);
            prox += std::abs(diff);
            d_xhat(r, j) += cfg.w_prox * (diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0));
          }
        }
        prox /= static_cast<double>(b);

        std::vector<double> ones(b, 1.0);
        const double adv_loss = binary_cross_entropy(disc_fwd.outputs(), ones);
        const double clf_loss = cross_entropy(clf_fwd.outputs(), wanted);
        const double gen_loss = cfg.w_adv * adv_loss + cfg.w_clf * clf_loss + cfg.w_prox * prox;
        if (!std::isfinite(gen_loss)) {
          throw TrainingError("countergan generator diverged at epoch " + std::to_string(epoch));
        }
        gen_loss_sum += gen_loss * static_cast<double>(b);

        // d(loss_i)/d(tanh output row i) = delta_scale * d(loss_i)/d(x_hat row i).
        scale_inplace(d_xhat, pair.generator.delta_scale);
        std::vector<GradientSet> per_example =
            per_example_gradients(pair.generator.net, gen_fwd, d_xhat, /*from_logits=*/false);
        if (cfg.dp) {
          dp_adam_step(gen_state, pair.generator.net, per_example, *cfg.dp, noise_rng);
        } else {
          adam_step(gen_state, pair.generator.net, mean_of(per_example));
        }
      }
    }
    pair.generator_loss.push_back(gen_loss_sum / static_cast<double>(order.size()));
    pair.discriminator_loss.push_back(disc_loss_sum / static_cast<double>(order.size()));
  }
  return pair;
}

}  // namespace cfmea
