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

#include "doctest.h"

#include <cmath>

#include "cfmea/error.hpp"
#include "cfmea/network.hpp"
#include "oracles.hpp"

using namespace cfmea;

namespace {

DenseLayer identity_layer(std::size_t dim) {
  DenseLayer layer;
  layer.weights = Matrix(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) layer.weights(i, i) = 1.0;
  layer.biases.assign(dim, 0.0);
  layer.activation = Activation::identity;
  return layer;
}

Matrix random_batch(RandomEngine& rng, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  for (double& v : m.data) v = rng.uniform(-2.0, 2.0);
  return m;
}

}  // namespace

TEST_CASE("matmul against hand-computed product") {
  Matrix a = Matrix::from_rows({{1, 2, 3}, {4, 5, 6}});
  Matrix b = Matrix::from_rows({{7, 8}, {9, 10}, {11, 12}});
  Matrix c = matmul(a, b);
  CHECK(c.rows == 2);
  CHECK(c.cols == 2);
  CHECK(c(0, 0) == doctest::Approx(58));
  CHECK(c(0, 1) == doctest::Approx(64));
  CHECK(c(1, 0) == doctest::Approx(139));
  CHECK(c(1, 1) == doctest::Approx(154));
  CHECK_THROWS_AS(matmul(a, a), ShapeError);
}

TEST_CASE("matmul_at_b and matmul_a_bt match explicit transposes") {
  RandomEngine rng(7);
  Matrix a = random_batch(rng, 4, 3);
  Matrix b = random_batch(rng, 4, 5);
  Matrix atb = matmul_at_b(a, b);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      double expect = 0.0;
      for (std::size_t k = 0; k < 4; ++k) expect += a(k, i) * b(k, j);
      CHECK(atb(i, j) == doctest::Approx(expect));
    }
  }
  Matrix c = random_batch(rng, 2, 3);
  Matrix d = random_batch(rng, 6, 3);
  Matrix cbt = matmul_a_bt(c, d);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 6; ++j) {
      double expect = 0.0;
      for (std::size_t k = 0; k < 3; ++k) expect += c(i, k) * d(j, k);
      CHECK(cbt(i, j) == doctest::Approx(expect));
    }
  }
}

TEST_CASE("forward through an identity layer is the identity") {
  DenseNetwork net(2, {identity_layer(2)});
  Matrix batch = Matrix::from_rows({{1, 2}});
  ForwardResult fwd = forward(net, batch);
  CHECK(fwd.outputs()(0, 0) == 1.0);
  CHECK(fwd.outputs()(0, 1) == 2.0);
  CHECK(fwd.post.size() == 2);
  CHECK(fwd.pre.size() == 1);
}

TEST_CASE("forward rejects mismatched input width") {
  DenseNetwork net(2, {identity_layer(2)});
  CHECK_THROWS_AS(forward(net, Matrix(1, 3)), ShapeError);
}

TEST_CASE("softmax on zero logits is uniform and rows always sum to 1") {
  DenseLayer layer = identity_layer(2);
  layer.activation = Activation::softmax;
  DenseNetwork net(2, {layer});
  Matrix out = output_of(net, Matrix::from_rows({{0, 0}}));
  CHECK(out(0, 0) == doctest::Approx(0.5));
  CHECK(out(0, 1) == doctest::Approx(0.5));

  RandomEngine rng(3);
  RandomEngine init = rng.split("init");
  DenseNetwork random_net =
      make_mlp(4, {8, 8}, Activation::gelu, 3, Activation::softmax, init);
  Matrix probs = output_of(random_net, random_batch(rng, 32, 4));
  for (std::size_t r = 0; r < probs.rows; ++r) {
    double sum = 0.0;
    for (std::size_t j = 0; j < probs.cols; ++j) {
      CHECK(probs(r, j) > 0.0);
      sum += probs(r, j);
    }
    CHECK(std::abs(sum - 1.0) < 1e-9);
  }
}

TEST_CASE("softmax placement is restricted to the final layer") {
  DenseLayer first = identity_layer(2);
  first.activation = Activation::softmax;
  DenseLayer second = identity_layer(2);
  CHECK_THROWS_AS(DenseNetwork(2, {first, second}), ShapeError);
}

TEST_CASE("gelu matches the quadrature oracle for the exact CDF form") {
  CHECK(gelu(0.0) == 0.0);
  // Frozen from the Simpson oracle: 1 * Phi(1).
  const double expected = testing::normal_cdf_quadrature(1.0) * 1.0;
  CHECK(std::abs(expected - 0.8413447460685429) < 1e-12);
  CHECK(std::abs(gelu(1.0) - expected) < 1e-9);
  CHECK(std::abs(gelu(1.0) - 0.8413447) < 5e-8);
  for (double x : {-3.0, -1.5, -0.1, 0.2, 0.9, 2.7}) {
    CHECK(std::abs(gelu(x) - x * testing::normal_cdf_quadrature(x)) < 1e-9);
  }
}

TEST_CASE("forward is deterministic") {
  RandomEngine rng(11);
  RandomEngine init = rng.split("init");
  DenseNetwork net = make_mlp(3, {6, 5}, Activation::tanh, 2, Activation::softmax, init);
  Matrix batch = random_batch(rng, 4, 3);
  Matrix a = output_of(net, batch);
  Matrix b = output_of(net, batch);
  CHECK(a.data == b.data);
}

TEST_CASE("backward with zero output gradient is all zeros") {
  RandomEngine rng(5);
  DenseNetwork net = make_mlp(3, {4}, Activation::relu, 2, Activation::softmax, rng);
  Matrix batch = random_batch(rng, 3, 3);
  ForwardResult fwd = forward(net, batch);
  GradientSet g = backward(net, fwd, Matrix(3, 2));
  CHECK(g.global_norm() == 0.0);
}

TEST_CASE("single linear layer least squares: gradient is x^T (y_hat - y)") {
  DenseLayer layer;
  layer.weights = Matrix::from_rows({{0.5, -0.2}, {0.1, 0.4}, {-0.3, 0.8}});
  layer.biases = {0.05, -0.1};
  layer.activation = Activation::identity;
  DenseNetwork net(3, {layer});
  Matrix x = Matrix::from_rows({{1.0, -2.0, 0.5}});
  Matrix y = Matrix::from_rows({{0.3, 0.7}});
  ForwardResult fwd = forward(net, x);
  // L = 0.5 * ||y_hat - y||^2 on one sample -> dL/dy_hat = y_hat - y.
  Matrix residual(1, 2);
  residual(0, 0) = fwd.outputs()(0, 0) - y(0, 0);
  residual(0, 1) = fwd.outputs()(0, 1) - y(0, 1);
  GradientSet g = backward(net, fwd, residual);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(g.layers[0].weights(i, j) == doctest::Approx(x(0, i) * residual(0, j)));
    }
  }
  CHECK(g.layers[0].biases[0] == doctest::Approx(residual(0, 0)));
  CHECK(g.layers[0].biases[1] == doctest::Approx(residual(0, 1)));
}

TEST_CASE("cross-entropy gradient matches finite differences on a 3-layer net") {
  RandomEngine rng(17);
  RandomEngine init = rng.split("init");
  DenseNetwork net = make_mlp(4, {5, 4}, Activation::gelu, 2, Activation::softmax, init);
  Matrix batch = random_batch(rng, 6, 4);
  std::vector<int> labels = {0, 1, 1, 0, 1, 0};

  ForwardResult fwd = forward(net, batch);
  // dL/dp for mean cross-entropy, pushed through the softmax Jacobian.
  Matrix dldp(6, 2);
  for (std::size_t r = 0; r < 6; ++r) {
    dldp(r, static_cast<std::size_t>(labels[r])) =
        -1.0 / (fwd.outputs()(r, static_cast<std::size_t>(labels[r])) * 6.0);
  }
  GradientSet analytic = backward(net, fwd, dldp);

  GradientSet fd = testing::finite_difference_gradient(net, [&](const DenseNetwork& n) {
    return cross_entropy(output_of(n, batch), labels);
  });
  CHECK(testing::max_gradient_error(analytic, fd) < 1e-4);

  // The fused logit-space route agrees with the Jacobian route.
  GradientSet fused =
      backward_from_logits(net, fwd, cross_entropy_logit_grad(fwd.outputs(), labels));
  CHECK(testing::max_gradient_error(analytic, fused, 1e-12) < 1e-9);
}

TEST_CASE("finite differences across every activation, nets up to 4 layers") {
  RandomEngine rng(23);
  const Activation acts[] = {Activation::identity, Activation::relu, Activation::gelu,
                             Activation::tanh, Activation::sigmoid};
  for (Activation hidden : acts) {
    for (Activation output : acts) {
      RandomEngine init = rng.split("init", static_cast<int>(hidden) * 8 + static_cast<int>(output));
      DenseNetwork net = make_mlp(3, {5, 4, 3}, hidden, 2, output, init);
      Matrix batch = random_batch(rng, 4, 3);
      // Random linear functional of the outputs keeps the check loss-agnostic.
      const double c0 = rng.uniform(-1, 1), c1 = rng.uniform(-1, 1);
      auto loss = [&](const DenseNetwork& n) {
        Matrix out = output_of(n, batch);
        double sum = 0.0;
        for (std::size_t r = 0; r < out.rows; ++r) sum += c0 * out(r, 0) + c1 * out(r, 1);
        return sum / static_cast<double>(out.rows);
      };
      ForwardResult fwd = forward(net, batch);
      Matrix output_grad(4, 2);
      for (std::size_t r = 0; r < 4; ++r) {
        output_grad(r, 0) = c0 / 4.0;
        output_grad(r, 1) = c1 / 4.0;
      }
      GradientSet analytic = backward(net, fwd, output_grad);
      GradientSet fd = testing::finite_difference_gradient(net, loss);
      CHECK(testing::max_gradient_error(analytic, fd) < 1e-4);
    }
  }
}

TEST_CASE("per-example gradients: batch of one equals backward") {
  RandomEngine rng(31);
  DenseNetwork net = make_mlp(3, {4}, Activation::relu, 2, Activation::softmax, rng);
  Matrix batch = random_batch(rng, 1, 3);
  std::vector<int> labels = {1};
  auto per_example = per_example_gradients(net, batch, labels);
  REQUIRE(per_example.size() == 1);
  ForwardResult fwd = forward(net, batch);
  GradientSet direct = backward_from_logits(net, fwd, cross_entropy_logit_grad(fwd.outputs(), labels));
  CHECK(testing::max_gradient_error(per_example[0], direct, 1e-15) < 1e-12);
}

TEST_CASE("per-example gradients: duplicated rows give identical gradients") {
  RandomEngine rng(37);
  DenseNetwork net = make_mlp(3, {4}, Activation::gelu, 2, Activation::softmax, rng);
  Matrix row = random_batch(rng, 1, 3);
  Matrix batch = vstack(row, row);
  auto per_example = per_example_gradients(net, batch, {1, 1});
  REQUIRE(per_example.size() == 2);
  for (std::size_t k = 0; k < per_example[0].layers.size(); ++k) {
    CHECK(per_example[0].layers[k].weights.data == per_example[1].layers[k].weights.data);
    CHECK(per_example[0].layers[k].biases == per_example[1].layers[k].biases);
  }
}

TEST_CASE("per-example gradients average to the batch gradient within 1e-10") {
  RandomEngine rng(41);
  RandomEngine init = rng.split("init");
  DenseNetwork net = make_mlp(4, {6, 5}, Activation::gelu, 2, Activation::softmax, init);
  Matrix batch = random_batch(rng, 4, 4);
  std::vector<int> labels = {0, 1, 0, 1};
  GradientSet averaged = mean_of(per_example_gradients(net, batch, labels));
  ForwardResult fwd = forward(net, batch);
  GradientSet whole =
      backward_from_logits(net, fwd, cross_entropy_logit_grad(fwd.outputs(), labels));
  double worst = 0.0;
  for (std::size_t k = 0; k < whole.layers.size(); ++k) {
    for (std::size_t i = 0; i < whole.layers[k].weights.data.size(); ++i) {
      worst = std::max(worst, std::abs(whole.layers[k].weights.data[i] -
                                       averaged.layers[k].weights.data[i]));
    }
    for (std::size_t i = 0; i < whole.layers[k].biases.size(); ++i) {
      worst = std::max(worst,
                       std::abs(whole.layers[k].biases[i] - averaged.layers[k].biases[i]));
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("per_example_gradients rejects an empty batch") {
  RandomEngine rng(43);
  DenseNetwork net = make_mlp(3, {4}, Activation::relu, 2, Activation::softmax, rng);
  CHECK_THROWS_AS(per_example_gradients(net, Matrix(0, 3), {}), ValueError);
}

TEST_CASE("cross_entropy hand values") {
  CHECK(cross_entropy(Matrix::from_rows({{1.0, 0.0}}), {0}) == doctest::Approx(0.0));
  CHECK(cross_entropy(Matrix::from_rows({{0.5, 0.5}}), {0}) == doctest::Approx(std::log(2.0)));
  CHECK(cross_entropy(Matrix::from_rows({{0.5, 0.5}}), {1}) == doctest::Approx(std::log(2.0)));
  CHECK(cross_entropy(Matrix::from_rows({{0.8, 0.2}}), {1}) ==
        doctest::Approx(-std::log(0.2)).epsilon(1e-6));
  CHECK_THROWS_AS(cross_entropy(Matrix::from_rows({{0.8, 0.2}}), {2}), ValueError);
}

TEST_CASE("predict_class takes the row argmax with ties to the lower index") {
  DenseLayer layer = identity_layer(2);
  layer.activation = Activation::softmax;
  DenseNetwork net(2, {layer});
  // Softmax preserves argmax of the logits; equal logits give a tie.
  Matrix batch = Matrix::from_rows({{2.0, 0.1}, {0.3, 0.3}, {-1.0, 4.0}});
  std::vector<int> got = predict_class(net, batch);
  CHECK(got == std::vector<int>{0, 0, 1});
}
