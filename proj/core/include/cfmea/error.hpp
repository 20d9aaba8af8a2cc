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

#ifndef CFMEA_ERROR_HPP_
#define CFMEA_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace cfmea {

/// Tensor or network dimension mismatch.
struct ShapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid argument value (bad label, empty batch, non-finite entries, ...).
struct ValueError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// CSV ingestion failure; the message carries the row/column location.
struct IngestError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Model-file format violation (bad magic, version mismatch, truncation).
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid plan or configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Training diverged; the message names the offending epoch.
struct TrainingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cfmea

#endif  // CFMEA_ERROR_HPP_
