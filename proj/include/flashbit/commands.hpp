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

// Byte format of the three in-flash computation commands.
//
//   MWS: C5 <ISCM> <blk:3> <pbm:6> [85 <blk:3> <pbm:6>]{0,3} D0
//   ESP: C6 <blk:3> <wl:1> <payload:page_bytes> D0
//   XOR: C7 <plane:1>
//
// Multi-byte fields are little-endian. ISCM bit0 = inverse, bit1 = init S,
// bit2 = init C, bit3 = move S->C; the upper nibble must be zero. Block
// addresses are die-level: plane * blocks_per_plane + block.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "flashbit/geometry.hpp"
#include "flashbit/sensing.hpp"

namespace flashbit {

inline constexpr uint8_t kOpMws = 0xC5;
inline constexpr uint8_t kOpEsp = 0xC6;
inline constexpr uint8_t kOpXor = 0xC7;
inline constexpr uint8_t kCont = 0x85;
inline constexpr uint8_t kConf = 0xD0;

inline constexpr size_t kMaxAddressGroups = 4;
inline constexpr uint32_t kMaxBlockAddress = (1u << 24) - 1;
inline constexpr size_t kEspPayloadBytes = 16 * 1024;

struct MwsFrame {
  MwsFlags flags;
  std::vector<BlockSelect> groups;
  bool operator==(const MwsFrame&) const = default;
};

struct EspFrame {
  uint32_t block = 0;
  uint8_t wordline = 0;
  std::vector<uint8_t> payload;
  bool operator==(const EspFrame&) const = default;
};

struct XorFrame {
  uint8_t plane = 0;
  bool operator==(const XorFrame&) const = default;
};

using CommandFrame = std::variant<MwsFrame, EspFrame, XorFrame>;

// Throws MalformedFrame for frames that cannot be represented.
std::vector<uint8_t> encode(const CommandFrame& frame);
void encode_into(const CommandFrame& frame, std::vector<uint8_t>& out);

// Decodes exactly one frame; trailing bytes are an error. The ESP payload is
// everything between the address and the final CONF byte.
CommandFrame decode(std::span<const uint8_t> bytes);

// Decodes a concatenation of frames. ESP payloads have a fixed size.
std::vector<CommandFrame> decode_stream(std::span<const uint8_t> bytes,
                                        size_t esp_payload_bytes = kEspPayloadBytes);

MwsFrame to_frame(const MwsTarget& target, const MwsFlags& flags, const ChipGeometry& geometry);
MwsTarget to_target(const MwsFrame& frame, const ChipGeometry& geometry);

std::string to_hex(std::span<const uint8_t> bytes);
std::vector<uint8_t> from_hex(std::string_view hex);

}  // namespace flashbit
