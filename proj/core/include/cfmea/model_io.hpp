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

#ifndef CFMEA_MODEL_IO_HPP_
#define CFMEA_MODEL_IO_HPP_

#include <string>

#include "cfmea/network.hpp"

namespace cfmea {

// Binary model format, little-endian throughout:
//   magic "CFMEANET" (8 bytes), u32 format version (currently 1),
//   u32 input_dim, u32 layer count, then per layer
//   u32 fan_in, u32 fan_out, u8 activation tag, then per layer
//   fan_in*fan_out f64 weights (row-major) followed by fan_out f64 biases.
// load(save(net)) reproduces forward outputs bitwise.

void save_model(const DenseNetwork& net, const std::string& path);
DenseNetwork load_model(const std::string& path);

}  // namespace cfmea

#endif  // CFMEA_MODEL_IO_HPP_
