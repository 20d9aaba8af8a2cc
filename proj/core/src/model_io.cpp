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

#include "cfmea/model_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "cfmea/error.hpp"

namespace cfmea {

namespace {

constexpr char kMagic[8] = {'C', 'F', 'M', 'E', 'A', 'N', 'E', 'T'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char bytes[4];
  for (int i = 0; i < 4; ++i) bytes[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(bytes), 4);
}

void put_f64(std::ostream& out, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

std::uint32_t get_u32(std::istream& in, const std::string& what) {
  unsigned char bytes[4];
  if (!in.read(reinterpret_cast<char*>(bytes), 4)) {
    throw FormatError("truncated model file while reading " + what);
  }
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& in, const std::string& what) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) {
    throw FormatError("truncated model file while reading " + what);
  }
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

}  // namespace

void save_model(const DenseNetwork& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open for writing: " + path);
  out.write(kMagic, sizeof(kMagic));
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(net.input_dim));
  put_u32(out, static_cast<std::uint32_t>(net.layers.size()));
  for (const DenseLayer& layer : net.layers) {
    put_u32(out, static_cast<std::uint32_t>(layer.fan_in()));
    put_u32(out, static_cast<std::uint32_t>(layer.fan_out()));
    const char tag = static_cast<char>(layer.activation);
    out.write(&tag, 1);
  }
  for (const DenseLayer& layer : net.layers) {
    for (double w : layer.weights.data) put_f64(out, w);
    for (double b : layer.biases) put_f64(out, b);
  }
  if (!out) throw FormatError("write failed: " + path);
}

DenseNetwork load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open model file: " + path);
  char magic[8];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw FormatError("bad magic bytes: not a model file: " + path);
  }
  const std::uint32_t version = get_u32(in, "format version");
  if (version != kVersion) {
    throw FormatError("unsupported model format version " + std::to_string(version));
  }
  const std::uint32_t input_dim = get_u32(in, "input_dim");
  const std::uint32_t n_layers = get_u32(in, "layer count");
  if (n_layers == 0) throw FormatError("model file declares zero layers: " + path);

  struct LayerHeader {
    std::uint32_t fan_in, fan_out;
    Activation act;
  };
  std::vector<LayerHeader> headers;
  headers.reserve(n_layers);
  for (std::uint32_t k = 0; k < n_layers; ++k) {
    LayerHeader h{};
    h.fan_in = get_u32(in, "layer fan_in");
    h.fan_out = get_u32(in, "layer fan_out");
    char tag = 0;
    if (!in.read(&tag, 1)) throw FormatError("truncated model file while reading activation tag");
    if (tag < 0 || tag > static_cast<char>(Activation::softmax)) {
      throw FormatError("unknown activation tag " + std::to_string(static_cast<int>(tag)));
    }
    h.act = static_cast<Activation>(tag);
    headers.push_back(h);
  }
  std::vector<DenseLayer> layers;
  layers.reserve(n_layers);
  for (const LayerHeader& h : headers) {
    DenseLayer layer;
    layer.weights = Matrix(h.fan_in, h.fan_out);
    layer.biases.assign(h.fan_out, 0.0);
    layer.activation = h.act;
    for (double& w : layer.weights.data) w = get_f64(in, "weights");
    for (double& b : layer.biases) b = get_f64(in, "biases");
    layers.push_back(std::move(layer));
  }
  char extra = 0;
  if (in.read(&extra, 1)) throw FormatError("trailing bytes after model payload: " + path);
  try {
    return DenseNetwork(input_dim, std::move(layers));
  } catch (const ShapeError& e) {
    throw FormatError(std::string("inconsistent model file: ") + e.what());
  }
}

}  // namespace cfmea
