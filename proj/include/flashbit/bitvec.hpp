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

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace flashbit {

// Bit j of a page is the value sensed on bitline j.
using BitVector = boost::dynamic_bitset<uint64_t>;

inline BitVector ones(size_t n) { return ~BitVector(n); }
inline BitVector zeros(size_t n) { return BitVector(n); }

// Little-endian bit order: bit j lives in byte j/8 at position j%8.
BitVector from_bytes(std::span<const uint8_t> bytes, size_t nbits);
std::vector<uint8_t> to_bytes(const BitVector& v);

BitVector random_bits(size_t n, uint64_t seed, double p_one = 0.5);

inline size_t hamming(const BitVector& a, const BitVector& b) { return (a ^ b).count(); }

}  // namespace flashbit
