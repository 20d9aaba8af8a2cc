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

#include "cfmea/matrix.hpp"

#include <cmath>
#include <cstring>

#include "cfmea/error.hpp"

namespace cfmea {

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> values) {
  Matrix m;
  m.rows = values.size();
  m.cols = values.size() ? values.begin()->size() : 0;
  m.data.reserve(m.rows * m.cols);
  for (const auto& row : values) {
    if (row.size() != m.cols) throw ShapeError("from_rows: ragged row lengths");
    m.data.insert(m.data.end(), row.begin(), row.end());
  }
  return m;
}

bool Matrix::all_finite() const {
  for (double v : data) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

Matrix Matrix::row_matrix(std::size_t r) const {
  Matrix m(1, cols);
  std::memcpy(m.data.data(), data.data() + r * cols, cols * sizeof(double));
  return m;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) throw ShapeError("matmul: inner dimensions differ");
  Matrix c(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    const double* arow = a.data.data() + i * a.cols;
    double* crow = c.data.data() + i * c.cols;
    for (std::size_t k = 0; k < a.cols; ++k) {
      const double aik = arow[k];
      if (aik == 0.0) continue;
      const double* brow = b.data.data() + k * b.cols;
      for (std::size_t j = 0; j < b.cols; ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

Matrix matmul_at_b(const Matrix& a, const Matrix& b) {
  if (a.rows != b.rows) throw ShapeError("matmul_at_b: row counts differ");
  Matrix c(a.cols, b.cols);
  for (std::size_t k = 0; k < a.rows; ++k) {
    const double* arow = a.data.data() + k * a.cols;
    const double* brow = b.data.data() + k * b.cols;
    for (std::size_t i = 0; i < a.cols; ++i) {
      const double aki = arow[i];
      if (aki == 0.0) continue;
      double* crow = c.data.data() + i * c.cols;
      for (std::size_t j = 0; j < b.cols; ++j) crow[j] += aki * brow[j];
    }
  }
  return c;
}

Matrix matmul_a_bt(const Matrix& a, const Matrix& b) {
  if (a.cols != b.cols) throw ShapeError("matmul_a_bt: column counts differ");
  Matrix c(a.rows, b.rows);
  for (std::size_t i = 0; i < a.rows; ++i) {
    const double* arow = a.data.data() + i * a.cols;
    double* crow = c.data.data() + i * c.cols;
    for (std::size_t j = 0; j < b.rows; ++j) {
      const double* brow = b.data.data() + j * b.cols;
      double sum = 0.0;
      for (std::size_t k = 0; k < a.cols; ++k) sum += arow[k] * brow[k];
      crow[j] = sum;
    }
  }
  return c;
}

Matrix vstack(const Matrix& top, const Matrix& bottom) {
  if (top.cols != bottom.cols) throw ShapeError("vstack: column counts differ");
  Matrix c(top.rows + bottom.rows, top.cols);
  std::memcpy(c.data.data(), top.data.data(), top.data.size() * sizeof(double));
  std::memcpy(c.data.data() + top.data.size(), bottom.data.data(),
              bottom.data.size() * sizeof(double));
  return c;
}

void add_inplace(Matrix& target, const Matrix& other) {
  if (target.rows != other.rows || target.cols != other.cols) {
    throw ShapeError("add_inplace: shapes differ");
  }
  for (std::size_t i = 0; i < target.data.size(); ++i) target.data[i] += other.data[i];
}

void scale_inplace(Matrix& target, double factor) {
  for (double& v : target.data) v *= factor;
}

}  // namespace cfmea
