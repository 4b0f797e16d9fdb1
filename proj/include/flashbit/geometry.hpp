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
#include <string>
#include <string_view>

namespace flashbit {

// Width of the page bitmap carried by an MWS command.
inline constexpr uint32_t kPbmWidth = 48;
inline constexpr uint32_t kMaxWordlinesPerBlock = 64;

struct ChipGeometry {
  uint32_t channels = 8;
  uint32_t dies_per_channel = 8;
  uint32_t planes_per_die = 2;
  // Each 196-WL physical block is modeled as four 48-WL sub-blocks.
  uint32_t blocks_per_plane = 2048 * 4;
  uint32_t wordlines_per_block = 48;
  uint32_t page_bytes = 16 * 1024;

  uint64_t bitlines_per_block() const { return uint64_t{page_bytes} * 8; }
  uint32_t dies() const { return channels * dies_per_channel; }
  uint32_t planes_total() const { return dies() * planes_per_die; }
  // Wordlines addressable by one PBM.
  uint32_t addressable_wordlines() const {
    return wordlines_per_block < kPbmWidth ? wordlines_per_block : kPbmWidth;
  }

  // Throws ConfigError when an invariant is violated.
  void validate() const;

  static ChipGeometry standard() { return {}; }
  // Single-die, single-plane geometry for exhaustive functional tests.
  static ChipGeometry toy(uint32_t page_bytes, uint32_t blocks = 16, uint32_t wordlines = 48);

  bool operator==(const ChipGeometry&) const = default;
};

enum class ProgramMode : uint8_t { Erased = 0, SLC = 1, ESP = 2, MLC = 3, TLC = 4 };

std::string_view to_string(ProgramMode mode);
ProgramMode program_mode_from_string(std::string_view s);

// Default ESP program time as a multiple of tPROG(SLC): 400 us / 200 us.
inline constexpr double kDefaultTespRatio = 2.0;

}  // namespace flashbit
