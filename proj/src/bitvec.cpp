// Copyright 2026 The flashbit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "flashbit/bitvec.hpp"

#include <random>

namespace flashbit {

BitVector from_bytes(std::span<const uint8_t> bytes, size_t nbits) {
  std::vector<uint64_t> blocks((nbits + 63) / 64, 0);
  const size_t nbytes = std::min(bytes.size(), (nbits + 7) / 8);
  for (size_t i = 0; i < nbytes; ++i) {
    blocks[i / 8] |= uint64_t{bytes[i]} << (8 * (i % 8));
  }
  BitVector v(blocks.begin(), blocks.end());
  v.resize(nbits);
  return v;
}

std::vector<uint8_t> to_bytes(const BitVector& v) {
  std::vector<uint64_t> blocks(v.num_blocks());
  boost::to_block_range(v, blocks.begin());
  std::vector<uint8_t> out((v.size() + 7) / 8);
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<uint8_t>(blocks[i / 8] >> (8 * (i % 8)));
  }
  return out;
}

BitVector random_bits(size_t n, uint64_t seed, double p_one) {
  std::mt19937_64 rng(seed);
  if (p_one == 0.5) {
    std::vector<uint64_t> blocks((n + 63) / 64);
    for (auto& b : blocks) b = rng();
    BitVector v(blocks.begin(), blocks.end());
    v.resize(n);
    return v;
  }
  std::bernoulli_distribution coin(p_one);
  BitVector v(n);
  for (size_t i = 0; i < n; ++i) {
    if (coin(rng)) v.set(i);
  }
  return v;
}

}  // namespace flashbit
