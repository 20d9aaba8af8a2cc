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

#include "cfmea/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cfmea/error.hpp"

namespace cfmea {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_cell(const std::string& raw, std::size_t data_row, const std::string& column) {
  const std::string cell = trim(raw);
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || cell.empty()) {
    throw IngestError("non-numeric cell at row " + std::to_string(data_row) + ", column '" +
                      column + "': '" + cell + "'");
  }
  return value;
}

}  // namespace

RawTable load_csv(const std::string& path, const std::string& target_column) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw IngestError("empty file: " + path);
  std::vector<std::string> header = split_line(line);
  for (std::string& name : header) name = trim(name);

  std::size_t target_idx = header.size();
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == target_column) target_idx = j;
  }
  if (target_idx == header.size()) {
    throw IngestError("missing target column '" + target_column + "' in " + path);
  }

  RawTable table;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j != target_idx) table.feature_names.push_back(header[j]);
  }
  const std::size_t n_features = header.size() - 1;

  std::vector<double> values;
  std::size_t data_row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++data_row;
    std::vector<std::string> fields = split_line(line);
    if (fields.size() != header.size()) {
      throw IngestError("row " + std::to_string(data_row) + " has " +
                        std::to_string(fields.size()) + " fields, header has " +
                        std::to_string(header.size()));
    }
    for (std::size_t j = 0; j < fields.size(); ++j) {
      const double v = parse_cell(fields[j], data_row, header[j]);
      if (j == target_idx) {
        table.target.push_back(v);
      } else {
        values.push_back(v);
      }
    }
  }
  if (data_row == 0) throw IngestError("no data rows in " + path);

  table.features.rows = data_row;
  table.features.cols = n_features;
  table.features.data = std::move(values);
  return table;
}

std::vector<int> binarize_median(const std::vector<double>& values) {
  if (values.empty()) throw ValueError("binarize_median: empty value list");
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const double median =
      n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = values[i] > median ? 1 : 0;
  return labels;
}

Dataset make_dataset(RawTable table, bool binarize_target) {
  Dataset ds;
  if (binarize_target) {
    ds.labels = binarize_median(table.target);
  } else {
    ds.labels.reserve(table.target.size());
    for (std::size_t i = 0; i < table.target.size(); ++i) {
      const double v = table.target[i];
      if (v != 0.0 && v != 1.0) {
        throw ValueError("target value at row " + std::to_string(i + 1) +
                         " is not binary: " + std::to_string(v));
      }
      ds.labels.push_back(v == 1.0 ? 1 : 0);
    }
  }
  if (!table.features.all_finite()) throw ValueError("dataset contains non-finite features");
  ds.features = std::move(table.features);
  ds.feature_names = std::move(table.feature_names);
  return ds;
}

Standardizer Standardizer::fit(const Matrix& train_rows) {
  if (train_rows.rows == 0) throw ValueError("Standardizer::fit: no rows");
  Standardizer s;
  s.mean.assign(train_rows.cols, 0.0);
  s.stddev.assign(train_rows.cols, 0.0);
  const double inv_n = 1.0 / static_cast<double>(train_rows.rows);
  for (std::size_t r = 0; r < train_rows.rows; ++r) {
    auto row = train_rows.row(r);
    for (std::size_t j = 0; j < train_rows.cols; ++j) s.mean[j] += row[j];
  }
  for (double& m : s.mean) m *= inv_n;
  for (std::size_t r = 0; r < train_rows.rows; ++r) {
    auto row = train_rows.row(r);
    for (std::size_t j = 0; j < train_rows.cols; ++j) {
      const double d = row[j] - s.mean[j];
      s.stddev[j] += d * d;
    }
  }
  for (double& v : s.stddev) {
    v = std::sqrt(v * inv_n);
    if (v < 1e-12) v = 1.0;  // zero-variance feature
  }
  return s;
}

Matrix Standardizer::transform(const Matrix& rows) const {
  if (rows.cols != mean.size()) throw ShapeError("Standardizer::transform: column count");
  Matrix out(rows.rows, rows.cols);
  for (std::size_t r = 0; r < rows.rows; ++r) {
    auto in_row = rows.row(r);
    auto out_row = out.row(r);
    for (std::size_t j = 0; j < rows.cols; ++j) {
      out_row[j] = (in_row[j] - mean[j]) / stddev[j];
    }
  }
  return out;
}

Matrix Standardizer::inverse_transform(const Matrix& rows) const {
  if (rows.cols != mean.size()) throw ShapeError("Standardizer::inverse_transform: column count");
  Matrix out(rows.rows, rows.cols);
  for (std::size_t r = 0; r < rows.rows; ++r) {
    auto in_row = rows.row(r);
    auto out_row = out.row(r);
    for (std::size_t j = 0; j < rows.cols; ++j) {
      out_row[j] = in_row[j] * stddev[j] + mean[j];
    }
  }
  return out;
}

std::pair<Dataset, Dataset> split(const Dataset& dataset, const SplitSpec& spec) {
  if (dataset.size() < 2) throw ValueError("split: need at least 2 rows");
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw ValueError("split: train_fraction must be in (0, 1)");
  }
  RandomEngine rng(spec.seed);
  std::vector<std::size_t> order = rng.permutation(dataset.size());
  const auto n_train = static_cast<std::size_t>(
      std::llround(spec.train_fraction * static_cast<double>(dataset.size())));

  auto take = [&](std::size_t begin, std::size_t end) {
    Dataset part;
    part.feature_names = dataset.feature_names;
    part.features = Matrix(end - begin, dataset.dim());
    part.labels.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
      const std::size_t src = order[i];
      auto dst = part.features.row(i - begin);
      auto row = dataset.features.row(src);
      std::copy(row.begin(), row.end(), dst.begin());
      part.labels.push_back(dataset.labels[src]);
    }
    return part;
  };
  return {take(0, n_train), take(n_train, dataset.size())};
}

Matrix sample_queries(std::size_t n, std::size_t dim, RandomEngine& rng) {
  if (n < 1) throw ValueError("sample_queries: n must be >= 1");
  Matrix q(n, dim);
  for (double& v : q.data) v = rng.uniform(-3.0, 3.0);
  return q;
}

Dataset synthetic_blobs(std::size_t n, std::size_t dim, double separation, std::uint64_t seed) {
  if (n % 2 != 0) throw ValueError("synthetic_blobs: n must be even");
  RandomEngine rng(seed);
  Dataset ds;
  ds.features = Matrix(n, dim);
  ds.labels.assign(n, 0);
  ds.feature_names.reserve(dim);
  for (std::size_t j = 0; j < dim; ++j) ds.feature_names.push_back("x" + std::to_string(j));
  const double offset = separation / 2.0;
  for (std::size_t i = 0; i < n; ++i) {
    const int label = i < n / 2 ? 0 : 1;
    const double center = label == 0 ? -offset : offset;
    auto row = ds.features.row(i);
    for (std::size_t j = 0; j < dim; ++j) row[j] = rng.normal(center, 1.0);
    ds.labels[i] = label;
  }
  return ds;
}

}  // namespace cfmea
