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

#ifndef CFMEA_MATRIX_HPP_
#define CFMEA_MATRIX_HPP_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace cfmea {

/// Row-major dense matrix of 64-bit floats.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> values);

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }

  std::size_t size() const { return rows * cols; }
  bool empty() const { return size() == 0; }
  bool all_finite() const;

  /// Copy of row r as a 1 x cols matrix.
  Matrix row_matrix(std::size_t r) const;
};

/// c = a(m x k) * b(k x n); throws ShapeError on inner-dimension mismatch.
Matrix matmul(const Matrix& a, const Matrix& b);

/// c = transpose(a) * b with a(k x m), b(k x n); no transpose is materialized.
Matrix matmul_at_b(const Matrix& a, const Matrix& b);

/// c = a * transpose(b) with a(m x k), b(n x k).
Matrix matmul_a_bt(const Matrix& a, const Matrix& b);

Matrix vstack(const Matrix& top, const Matrix& bottom);

void add_inplace(Matrix& target, const Matrix& other);
void scale_inplace(Matrix& target, double factor);

}  // namespace cfmea

#endif  // CFMEA_MATRIX_HPP_
