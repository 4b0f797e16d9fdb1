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

#include "flashbit/geometry.hpp"

#include <fmt/format.h>

#include "flashbit/error.hpp"

namespace flashbit {

void ChipGeometry::validate() const {
  if (channels == 0 || dies_per_channel == 0 || planes_per_die == 0 || blocks_per_plane == 0 ||
      wordlines_per_block == 0 || page_bytes == 0) {
    throw ConfigError("geometry counts must all be >= 1");
  }
  if (wordlines_per_block > kMaxWordlinesPerBlock) {
    throw ConfigError(fmt::format("wordlines_per_block {} exceeds {}", wordlines_per_block,
                                  kMaxWordlinesPerBlock));
  }
  if (planes_per_die > 256) throw ConfigError("planes_per_die must fit in one byte");
  if (uint64_t{planes_per_die} * blocks_per_plane > (1u << 24)) {
    throw ConfigError("die-level block address exceeds 24 bits");
  }
}

ChipGeometry ChipGeometry::toy(uint32_t page_bytes, uint32_t blocks, uint32_t wordlines) {
  ChipGeometry g;
  g.channels = 1;
  g.dies_per_channel = 1;
  g.planes_per_die = 1;
  g.blocks_per_plane = blocks;
  g.wordlines_per_block = wordlines;
  g.page_bytes = page_bytes;
  return g;
}

std::string_view to_string(ProgramMode mode) {
  switch (mode) {
    case ProgramMode::Erased: return "erased";
    case ProgramMode::SLC: return "slc";
    case ProgramMode::ESP: return "esp";
    case ProgramMode::MLC: return "mlc";
    case ProgramMode::TLC: return "tlc";
  }
  return "?";
}

ProgramMode program_mode_from_string(std::string_view s) {
  for (auto m : {ProgramMode::Erased, ProgramMode::SLC, ProgramMode::ESP, ProgramMode::MLC,
                 ProgramMode::TLC}) {
    if (to_string(m) == s) return m;
  }
  throw ConfigError(fmt::format("unknown program mode '{}'", s));
}

}  // namespace flashbit
