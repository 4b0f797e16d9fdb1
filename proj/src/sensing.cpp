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

#include "flashbit/sensing.hpp"

#include <set>

#include <fmt/format.h>

#include "flashbit/error.hpp"

namespace flashbit {

uint8_t MwsFlags::to_iscm() const {
  return static_cast<uint8_t>((inverse ? 1 : 0) | (init_s ? 2 : 0) | (init_c ? 4 : 0) |
                              (move_s_to_c ? 8 : 0));
}

MwsFlags MwsFlags::from_iscm(uint8_t iscm) {
  return {(iscm & 1) != 0, (iscm & 2) != 0, (iscm & 4) != 0, (iscm & 8) != 0};
}

void validate_target(const ChipState& chip, const MwsTarget& target) {
  const auto& g = chip.geometry();
  if (target.plane >= g.planes_per_die) {
    throw InvalidTarget(fmt::format("plane {} >= {}", target.plane, g.planes_per_die));
  }
  if (target.blocks.empty()) throw InvalidTarget("MWS needs at least one block");
  if (target.blocks.size() > chip.max_mws_blocks()) {
    throw InvalidTarget(fmt::format("{} blocks exceed the {}-block limit", target.blocks.size(),
                                    chip.max_mws_blocks()));
  }
  std::set<uint32_t> seen;
  const uint32_t wl = g.addressable_wordlines();
  for (const auto& b : target.blocks) {
    if (b.block >= g.blocks_per_plane) {
      throw InvalidTarget(fmt::format("block {} >= {}", b.block, g.blocks_per_plane));
    }
    if (!seen.insert(b.block).second) {
      throw InvalidTarget(fmt::format("block {} listed twice", b.block));
    }
    if (b.pbm == 0) throw InvalidTarget(fmt::format("empty PBM for block {}", b.block));
    if (wl < 64 && (b.pbm >> wl) != 0) {
      throw InvalidTarget(fmt::format("PBM selects wordlines beyond {} in block {}", wl, b.block));
    }
  }
}

BitVector raw_sense(const ChipState& chip, const MwsTarget& target, uint64_t sense_id) {
  validate_target(chip, target);
  const size_t n = chip.geometry().bitlines_per_block();
  BitVector out = zeros(n);
  for (const auto& b : target.blocks) {
    BitVector acc = ones(n);
    for (uint32_t w = 0; w < 64; ++w) {
      if (!((b.pbm >> w) & 1)) continue;
      PageAddress a{target.plane, b.block, w};
      if (chip.is_erased(a)) continue;  // all ones
      acc &= chip.sense_page(a, sense_id);
    }
    out |= acc;
  }
  return out;
}

BitVector raw_sense(ChipState& chip, const MwsTarget& target) {
  validate_target(chip, target);
  return raw_sense(static_cast<const ChipState&>(chip), target, chip.next_sense_id());
}

void mws_execute(ChipState& chip, const MwsTarget& target, const MwsFlags& flags) {
  if (flags.inverse && !flags.init_s) {
    throw InverseWithoutInit("inverse sensing requires initializing the sensing latch");
  }
  BitVector n = raw_sense(chip, target);
  if (flags.inverse) n.flip();
  auto& l = chip.latches(target.plane);
  if (flags.init_s) {
    l.s_latch = std::move(n);
  } else {
    l.s_latch &= n;
  }
  if (flags.init_c) l.c_latch.reset();
  if (flags.move_s_to_c) l.c_latch |= l.s_latch;
}

void xor_latches(ChipState& chip, uint32_t plane) {
  auto& l = chip.latches(plane);
  l.c_latch ^= l.s_latch;
}

BitVector read_cache(const ChipState& chip, uint32_t plane) { return chip.latches(plane).c_latch; }

}  // namespace flashbit
