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

// Versioned binary image of one chip, used for test fixtures.
//
//   "FCSM" | version:u16 | flags:u16 | geometry: 6 x u32 | seed:u64 |
//   sense_counter:u64 | max_mws_blocks:u32 | payload_bytes:u64 | payload
//
// All integers little-endian. Flag bit0 marks a zstd-compressed payload.
// The payload holds per-block wear, latches and programmed pages.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "flashbit/chip.hpp"

namespace flashbit {

inline constexpr uint16_t kSnapshotVersion = 1;
inline constexpr uint16_t kSnapshotFlagZstd = 0x1;

std::vector<uint8_t> save_snapshot(const ChipState& chip);

// Throws SnapshotError on bad magic, unknown version, truncation, or a
// compressed payload (this build writes and reads raw payloads only).
ChipState load_snapshot(std::span<const uint8_t> bytes);

void save_snapshot_file(const ChipState& chip, const std::string& path);
ChipState load_snapshot_file(const std::string& path);

}  // namespace flashbit
