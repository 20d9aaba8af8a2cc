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

#include "cfmea/extraction.hpp"

#include <cmath>
#include <limits>

#include "cfmea/dataset.hpp"
#include "cfmea/error.hpp"
#include "cfmea/training.hpp"

namespace cfmea {

OracleBundle query_oracle(const DenseNetwork& target, const GeneratorNet& explainer,
                          std::size_t n, RandomEngine& rng) {
  OracleBundle bundle;
  bundle.queries = sample_queries(n, target.input_dim, rng);
  bundle.query_probs = output_of(target, bundle.queries);
  Explanation ex = explain_batch(explainer, target, bundle.queries);
  bundle.cfs = std::move(ex.cfs);
  bundle.cf_probs = std::move(ex.cf_probs);
  return bundle;
}

AttackSet build_attack_set(const OracleBundle& bundle) {
  if (bundle.queries.rows != bundle.cfs.rows || bundle.queries.rows != bundle.query_probs.rows ||
      bundle.queries.rows != bundle.cf_probs.rows) {
    throw ShapeError("build_attack_set: bundle row counts differ");
  }
  AttackSet set;
  set.inputs = vstack(bundle.queries, bundle.cfs);
  set.teacher_probs = vstack(bundle.query_probs, bundle.cf_probs);
  set.hard_labels = argmax_rows(set.teacher_probs);
  return set;
}

namespace {

/// teacher^(1/T), renormalized per row; probabilities are clamped at 1e-12
/// before the log so one-hot teachers soften cleanly.
Matrix soften_teacher(const Matrix& teacher_probs, double temperature) {
  Matrix soft(teacher_probs.rows, teacher_probs.cols);
  for (std::size_t r = 0; r < teacher_probs.rows; ++r) {
    auto q = teacher_probs.row(r);
    auto s = soft.row(r);
    double max_log = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < teacher_probs.cols; ++j) {
      s[j] = std::log(std::max(q[j], 1e-12)) / temperature;
      max_log = std::max(max_log, s[j]);
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < teacher_probs.cols; ++j) {
      s[j] = std::exp(s[j] - max_log);
      sum += s[j];
    }
    for (std::size_t j = 0; j < teacher_probs.cols; ++j) s[j] /= sum;
  }
  return soft;
}

Matrix scaled_softmax(const Matrix& logits, double temperature) {
  Matrix scaled = logits;
  scale_inplace(scaled, 1.0 / temperature);
  return apply_activation(Activation::softmax, scaled);
}

void check_kd_args(const Matrix& logits, const Matrix& teacher, std::size_t n_labels,
                   double alpha, double temperature) {
  if (logits.rows != teacher.rows || logits.cols != teacher.cols) {
    throw ShapeError("kd_loss: student/teacher shapes differ");
  }
  if (n_labels != logits.rows) throw ShapeError("kd_loss: hard label count mismatch");
  if (alpha < 0.0 || alpha > 1.0) throw ValueError("kd_loss: alpha must be in [0, 1]");
  if (temperature < 1.0) throw ValueError("kd_loss: temperature must be >= 1");
}

}  // namespace

double kd_loss(const Matrix& student_logits, const Matrix& teacher_probs,
               const std::vector<int>& hard_labels, double alpha, double temperature) {
  check_kd_args(student_logits, teacher_probs, hard_labels.size(), alpha, temperature);
  const Matrix student_probs = apply_activation(Activation::softmax, student_logits);
  double loss = alpha > 0.0 ? alpha * cross_entropy(student_probs, hard_labels) : 0.0;
  if (alpha < 1.0) {
    const Matrix soft_teacher = soften_teacher(teacher_probs, temperature);
    const Matrix soft_student = scaled_softmax(student_logits, temperature);
    double kl = 0.0;
    for (std::size_t r = 0; r < soft_teacher.rows; ++r) {
      for (std::size_t j = 0; j < soft_teacher.cols; ++j) {
        const double q = soft_teacher(r, j);
        if (q <= 0.0) continue;
        kl += q * (std::log(q) - std::log(std::max(soft_student(r, j), 1e-12)));
      }
    }
    kl /= static_cast<double>(soft_teacher.rows);
    loss += (1.0 - alpha) * temperature * temperature * kl;
  }
  if (!std::isfinite(loss)) throw ValueError("kd_loss: non-finite loss");
  return loss;
}

Matrix kd_loss_grad(const Matrix& student_logits, const Matrix& teacher_probs,
                    const std::vector<int>& hard_labels, double alpha, double temperature) {
  check_kd_args(student_logits, teacher_probs, hard_labels.size(), alpha, temperature);
  const std::size_t batch = student_logits.rows;
  Matrix grad(student_logits.rows, student_logits.cols);
  const Matrix student_probs = apply_activation(Activation::softmax, student_logits);
  if (alpha > 0.0) {
    for (std::size_t r = 0; r < batch; ++r) {
      for (std::size_t j = 0; j < grad.cols; ++j) {
        const double onehot = static_cast<std::size_t>(hard_labels[r]) == j ? 1.0 : 0.0;
        grad(r, j) = alpha * (student_probs(r, j) - onehot);
      }
    }
  }
  if (alpha < 1.0) {
    // d/dz [T^2 KL(q_T || softmax(z/T))] = T (softmax(z/T) - q_T).
    const Matrix soft_teacher = soften_teacher(teacher_probs, temperature);
    const Matrix soft_student = scaled_softmax(student_logits, temperature);
    for (std::size_t r = 0; r < batch; ++r) {
      for (std::size_t j = 0; j < grad.cols; ++j) {
        grad(r, j) += (1.0 - alpha) * temperature * (soft_student(r, j) - soft_teacher(r, j));
      }
    }
  }
  scale_inplace(grad, 1.0 / static_cast<double>(batch));
  return grad;
}

namespace {

struct DistillationPolicy {
  const AttackSet& set;
  double alpha;
  double temperature;

  bool from_logits() const { return true; }

  Matrix batch_teacher(const std::vector<std::size_t>& idx) const {
    return detail::gather_rows(set.teacher_probs, idx);
  }

  std::vector<int> batch_labels(const std::vector<std::size_t>& idx) const {
    std::vector<int> out(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) out[i] = set.hard_labels[idx[i]];
    return out;
  }

  double loss(const ForwardResult& fwd, const std::vector<std::size_t>& idx) const {
    return kd_loss(fwd.pre.back(), batch_teacher(idx), batch_labels(idx), alpha, temperature);
  }

  Matrix batch_grad(const ForwardResult& fwd, const std::vector<std::size_t>& idx) const {
    return kd_loss_grad(fwd.pre.back(), batch_teacher(idx), batch_labels(idx), alpha,
                        temperature);
  }

  Matrix row_grads(const ForwardResult& fwd, const std::vector<std::size_t>& idx) const {
    Matrix grad = kd_loss_grad(fwd.pre.back(), batch_teacher(idx), batch_labels(idx), alpha,
                               temperature);
    scale_inplace(grad, static_cast<double>(idx.size()));
    return grad;
  }
};

}  // namespace

DenseNetwork run_attack(const DenseNetwork& target, const GeneratorNet& explainer,
                        const AttackConfig& cfg, const SurrogateSpec& spec) {
  if (cfg.n_queries < 1) throw ValueError("run_attack: n_queries must be >= 1");
  RandomEngine rng(cfg.seed);
  RandomEngine oracle_rng = rng.split("oracle");
  const OracleBundle bundle = query_oracle(target, explainer, cfg.n_queries, oracle_rng);
  const AttackSet set = build_attack_set(bundle);

  std::vector<double> candidates;
  if (cfg.learning_rate) {
    candidates.push_back(*cfg.learning_rate);
  } else {
    candidates = cfg.learning_rate_grid;
  }
  if (candidates.empty()) throw ValueError("run_attack: no learning-rate candidates");

  DenseNetwork best;
  double best_loss = std::numeric_limits<double>::infinity();
  for (double lr : candidates) {
    RandomEngine init_rng = rng.split("init");
    DenseNetwork surrogate = make_mlp(target.input_dim, spec.hidden, Activation::relu,
                                      target.output_dim(), Activation::softmax, init_rng);
    TrainConfig train_cfg;
    train_cfg.epochs = cfg.epochs;
    train_cfg.batch_size = cfg.batch_size;
    train_cfg.learning_rate = lr;
    train_cfg.dp = cfg.dp;
    TrainSummary summary = detail::train_loop(
        surrogate, set.inputs, DistillationPolicy{set, cfg.alpha, cfg.temperature}, train_cfg,
        rng.split("train"));
    if (summary.final_loss() < best_loss) {
      best_loss = summary.final_loss();
      best = std::move(surrogate);
    }
  }
  return best;
}

double agreement(const DenseNetwork& a, const DenseNetwork& b, const Matrix& test_features) {
  if (test_features.rows == 0) throw ValueError("agreement: empty test set");
  const std::vector<int> pa = predict_class(a, test_features);
  const std::vector<int> pb = predict_class(b, test_features);
  std::size_t matches = 0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    if (pa[i] == pb[i]) ++matches;
  }
  return static_cast<double>(matches) / static_cast<double>(pa.size());
}

}  // namespace cfmea
