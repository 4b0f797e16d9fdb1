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
#include <vector>

#include "flashbit/bitvec.hpp"
#include "flashbit/chip.hpp"

namespace flashbit {

struct BlockSelect {
  uint32_t block = 0;
  uint64_t pbm = 0;  // bit w selects wordline w
  bool operator==(const BlockSelect&) const = default;
};

struct MwsTarget {
  uint32_t plane = 0;
  std::vector<BlockSelect> blocks;
  bool operator==(const MwsTarget&) const = default;
};

struct MwsFlags {
  bool inverse = false;
  bool init_s = false;
  bool init_c = false;
  bool move_s_to_c = false;

  uint8_t to_iscm() const;
  static MwsFlags from_iscm(uint8_t iscm);
  bool operator==(const MwsFlags&) const = default;
};

// Throws InvalidTarget.
void validate_target(const ChipState& chip, const MwsTarget& target);

// OR over selected blocks of the AND over each block's selected wordlines.
// Every participating page draws its own errors for this evaluation.
BitVector raw_sense(const ChipState& chip, const MwsTarget& target, uint64_t sense_id);
BitVector raw_sense(ChipState& chip, const MwsTarget& target);

// Latch update for one MWS command:
//   N = raw_sense (complemented if inverse)
//   S = init_s ? N : S & N
//   C = init_c ? 0 : C           (cleared before the move)
//   C = move   ? C | S : C
void mws_execute(ChipState& chip, const MwsTarget& target, const MwsFlags& flags);

// C = S ^ C
void xor_latches(ChipState& chip, uint32_t plane);

BitVector read_cache(const ChipState& chip, uint32_t plane);

}  // namespace flashbit
