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

#ifndef CFMEA_DATASET_HPP_
#define CFMEA_DATASET_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cfmea/matrix.hpp"
#include "cfmea/rng.hpp"

namespace cfmea {

/// Numeric table straight from a CSV: features plus the raw target column.
struct RawTable {
  Matrix features;
  std::vector<double> target;
  std::vector<std::string> feature_names;
};

/// Feature matrix with binary labels.
struct Dataset {
  Matrix features;
  std::vector<int> labels;
  std::vector<std::string> feature_names;

  std::size_t size() const { return features.rows; }
  std::size_t dim() const { return features.cols; }
};

struct SplitSpec {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
};

/// Per-feature affine map fitted on training rows only. Zero-variance
/// features keep stddev 1 and map to 0.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> stddev;

  static Standardizer fit(const Matrix& train_rows);
  Matrix transform(const Matrix& rows) const;
  Matrix inverse_transform(const Matrix& rows) const;
};

/// Parses a comma-separated numeric file with one header row. Errors carry
/// the 1-based data row and the column involved.
RawTable load_csv(const std::string& path, const std::string& target_column);

/// Label 1 iff value > median; the median of an even-length list is the mean
/// of the two central order statistics.
std::vector<int> binarize_median(const std::vector<double>& values);

/// binarize_target = false requires the target column to already be 0/1.
Dataset make_dataset(RawTable table, bool binarize_target);

/// Seeded shuffle then train/test partition (disjoint, covering).
std::pair<Dataset, Dataset> split(const Dataset& dataset, const SplitSpec& spec);

/// Attacker query cube: i.i.d. uniform entries on [-3, 3].
Matrix sample_queries(std::size_t n, std::size_t dim, RandomEngine& rng);

/// Two unit-variance Gaussian clusters at +/-(separation/2) per coordinate,
/// labels by cluster. n must be even.
Dataset synthetic_blobs(std::size_t n, std::size_t dim, double separation, std::uint64_t seed);

}  // namespace cfmea

#endif  // CFMEA_DATASET_HPP_
