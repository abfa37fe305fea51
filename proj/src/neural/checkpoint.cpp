// Copyright 2026 The vfdenoise Authors
// SPDX-License-Identifier: Apache-2.0
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

#include "vfd/neural/checkpoint.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "vfd/normative.hpp"

namespace vfd::nn {
namespace {

constexpr const char* kMagic = "vfd-checkpoint";
constexpr int kVersion = 1;

std::string hex(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double parse_hex(const std::string& tok) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0') throw DataError("checkpoint: bad number " + tok);
  return v;
}

std::string expect_line(std::istream& is, const std::string& key) {
  std::string line;
  if (!std::getline(is, line)) throw DataError("checkpoint: truncated before " + key);
  if (line.rfind(key + " ", 0) != 0) throw DataError("checkpoint: expected " + key);
  return line.substr(key.size() + 1);
}

void read_values(std::istream& is, const std::string& key, std::vector<double>& out) {
  std::istringstream ls(expect_line(is, key));
  std::string tok;
  for (double& v : out) {
    if (!(ls >> tok)) throw DataError("checkpoint: too few values in " + key);
    v = parse_hex(tok);
  }
  if (ls >> tok) throw DataError("checkpoint: too many values in " + key);
}

}  // namespace

void write_checkpoint(std::ostream& os, const CheckpointRecord& ckpt) {
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(ckpt.config_hash));
  os << kMagic << ' ' << kVersion << '\n'
     << "variant " << ckpt.params.variant.tag() << '\n'
     << "config_hash " << hash << '\n'
     << "epoch " << ckpt.epoch << '\n'
     << "val_loss " << hex(ckpt.val_loss) << '\n'
     << "layers " << ckpt.params.layers.size() << '\n';
  for (const DenseLayer& l : ckpt.params.layers) {
    os << "layer " << l.name << ' ' << l.in << ' ' << l.out << ' '
       << (l.activation == Activation::ReLU ? "relu" : "identity") << '\n';
    os << 'w';
    for (double w : l.weights) os << ' ' << hex(w);
    os << "\nb";
    for (double b : l.bias) os << ' ' << hex(b);
    os << '\n';
  }
}

CheckpointRecord read_checkpoint(std::istream& is) {
  const std::string version = expect_line(is, kMagic);
  if (version != std::to_string(kVersion)) {
    throw DataError("checkpoint: unsupported version " + version);
  }
  const std::string tag = expect_line(is, "variant");
  const auto variant = Variant::parse(tag);
  if (!variant) throw DataError("checkpoint: unknown variant " + tag);

  CheckpointRecord ckpt;
  ckpt.params = Autoencoder::create(*variant);
  ckpt.config_hash = std::strtoull(expect_line(is, "config_hash").c_str(), nullptr, 16);
  ckpt.epoch = std::atoi(expect_line(is, "epoch").c_str());
  ckpt.val_loss = parse_hex(expect_line(is, "val_loss"));
  const std::size_t n_layers = std::strtoul(expect_line(is, "layers").c_str(), nullptr, 10);
  if (n_layers != ckpt.params.layers.size()) {
    throw DataError("checkpoint: layer count does not match variant " + tag);
  }
  for (DenseLayer& l : ckpt.params.layers) {
    std::istringstream ls(expect_line(is, "layer"));
    std::string name, act;
    std::size_t in = 0, out = 0;
    if (!(ls >> name >> in >> out >> act) || name != l.name || in != l.in ||
        out != l.out || act != (l.activation == Activation::ReLU ? "relu" : "identity")) {
      throw DataError("checkpoint: layer shape mismatch at " + l.name);
    }
    read_values(is, "w", l.weights);
    read_values(is, "b", l.bias);
  }
  return ckpt;
}

void save_checkpoint(const std::string& path, const CheckpointRecord& ckpt) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot write " + path);
  write_checkpoint(os, ckpt);
}

CheckpointRecord load_checkpoint(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot read " + path);
  return read_checkpoint(is);
}

}  // namespace vfd::nn
