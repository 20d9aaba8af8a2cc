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

#include "cfmea/metrics.hpp"

#include "cfmea/error.hpp"
#include "cfmea/training.hpp"

namespace cfmea {

ClassificationReport classification_report(const DenseNetwork& model, const Dataset& test) {
  if (test.size() == 0) throw ValueError("classification_report: empty test set");
  const std::vector<int> predicted = predict_class(model, test.features);
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const bool pos = predicted[i] == 1;
    const bool truth = test.labels[i] == 1;
    if (pos && truth) ++tp;
    else if (pos && !truth) ++fp;
    else if (!pos && truth) ++fn;
    else ++tn;
  }
  ClassificationReport report;
  const auto n = static_cast<double>(predicted.size());
  report.accuracy = static_cast<double>(tp + tn) / n;
  report.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  report.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  report.f1 = report.precision + report.recall > 0.0
                  ? 2.0 * report.precision * report.recall / (report.precision + report.recall)
                  : 0.0;
  return report;
}

std::vector<double> prediction_gain(const DenseNetwork& classifier, const Matrix& x,
                                    const Matrix& x_hat, int target_class) {
  if (x.rows != x_hat.rows || x.cols != x_hat.cols) {
    throw ShapeError("prediction_gain: x and x_hat shapes differ");
  }
  const std::size_t t = static_cast<std::size_t>(target_class);
  if (target_class < 0 || t >= classifier.output_dim()) {
    throw ValueError("prediction_gain: target class out of range");
  }
  const Matrix p_before = output_of(classifier, x);
  const Matrix p_after = output_of(classifier, x_hat);
  std::vector<double> gains(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) gains[r] = p_after(r, t) - p_before(r, t);
  return gains;
}

double mean_prediction_gain(const DenseNetwork& classifier, const GeneratorNet& gen,
                            const Matrix& points, std::optional<int> target_class) {
  if (points.rows == 0) throw ValueError("mean_prediction_gain: no points");
  const Matrix cfs = generate_cf(gen, points);
  const Matrix p_before = output_of(classifier, points);
  const Matrix p_after = output_of(classifier, cfs);
  const std::vector<int> predicted = argmax_rows(p_before);
  double sum = 0.0;
  std::size_t counted = 0;
  for (std::size_t r = 0; r < points.rows; ++r) {
    const int t = target_class.value_or(predicted[r] == 0 ? 1 : 0);
    if (predicted[r] == t) continue;  // gain is only meaningful when change is requested
    const auto tc = static_cast<std::size_t>(t);
    sum += p_after(r, tc) - p_before(r, tc);
    ++counted;
  }
  if (counted == 0) throw ValueError("mean_prediction_gain: every point already predicts t");
  return sum / static_cast<double>(counted);
}

DenseNetwork train_autoencoder(const Matrix& rows, int epochs, double learning_rate,
                               std::uint64_t seed) {
  if (rows.rows == 0) throw ValueError("train_autoencoder: no rows");
  RandomEngine rng(seed);
  RandomEngine init_rng = rng.split("init");
  DenseNetwork ae = make_mlp(rows.cols, {16, 8, 16}, Activation::relu, rows.cols,
                             Activation::identity, init_rng);
  TrainConfig cfg;
  cfg.epochs = epochs;
  cfg.batch_size = 128;
  cfg.learning_rate = learning_rate;
  train_reconstruction(ae, rows, rows, cfg, rng.split("train"));
  return ae;
}

double realism(const DenseNetwork& autoencoder, const Matrix& points) {
  if (points.rows == 0) throw ValueError("realism: empty point set");
  const Matrix recon = output_of(autoencoder, points);
  double sum = 0.0;
  for (std::size_t r = 0; r < points.rows; ++r) {
    auto p = points.row(r);
    auto q = recon.row(r);
    for (std::size_t j = 0; j < points.cols; ++j) {
      const double d = p[j] - q[j];
      sum += d * d;
    }
  }
  return sum / static_cast<double>(points.rows);
}

}  // namespace cfmea
