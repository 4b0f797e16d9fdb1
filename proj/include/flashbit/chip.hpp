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
#include <optional>
#include <unordered_map>
#include <vector>

#include "flashbit/bitvec.hpp"
#include "flashbit/geometry.hpp"
#include "flashbit/reliability.hpp"

namespace flashbit {

struct PageAddress {
  uint32_t plane = 0;
  uint32_t block = 0;
  uint32_t wordline = 0;
  bool operator==(const PageAddress&) const = default;
};

// Logical bit 1 = erased cell, 0 = programmed cell.
struct PageState {
  ProgramMode mode = ProgramMode::Erased;
  double tesp_ratio = 1.0;
  bool randomized = false;
  BitVector data;
};

struct LatchBank {
  BitVector s_latch;  // sensing latch
  BitVector c_latch;  // cache latch
};

// One NAND die. Erased pages are not materialized; absence means all-ones.
class ChipState {
 public:
  explicit ChipState(const ChipGeometry& geometry, uint64_t seed = 0,
                     RberModel rber_model = {});

  const ChipGeometry& geometry() const { return geometry_; }
  const RberModel& rber_model() const { return rber_model_; }
  void set_rber_model(RberModel model) { rber_model_ = std::move(model); }

  void erase_block(uint32_t plane, uint32_t block);

  // `randomized` defaults to true for every mode except ESP, which bypasses
  // the randomizer.
  void program_page(const PageAddress& addr, const BitVector& data, ProgramMode mode,
                    bool inverted = false, std::optional<bool> randomized = std::nullopt,
                    double tesp_ratio = kDefaultTespRatio);

  // Senses one page through the latch path (init S, init C, move) and
  // returns the cache latch.
  BitVector read_page(const PageAddress& addr, bool inverse = false);

  // Stored contents without sensing or errors.
  PageState page(const PageAddress& addr) const;
  bool is_erased(const PageAddress& addr) const;

  // Logical bit as sensed in this evaluation, errors included.
  BitVector sense_page(const PageAddress& addr, uint64_t sense_id) const;
  double page_error_rate(const PageAddress& addr) const;

  LatchBank& latches(uint32_t plane);
  const LatchBank& latches(uint32_t plane) const;

  uint64_t pe_cycles(uint32_t plane, uint32_t block) const;
  double retention_days(uint32_t plane, uint32_t block) const;
  // Experiment knobs. P/E count can only grow.
  void set_wear(uint32_t plane, uint32_t block, uint64_t pe_cycles, double retention_days);

  uint64_t seed() const { return seed_; }
  // Every sensing draws errors from a fresh, deterministic stream.
  uint64_t next_sense_id() { return sense_counter_++; }
  uint64_t sense_counter() const { return sense_counter_; }

  // Pages that hold programmed data, for serialization.
  std::vector<std::pair<PageAddress, PageState>> programmed_pages() const;
  void restore(uint64_t seed, uint64_t sense_counter);

  // Max blocks one MWS may activate. Deployment default 4; up to 32 for
  // characterization runs.
  uint32_t max_mws_blocks() const { return max_mws_blocks_; }
  void set_max_mws_blocks(uint32_t n);

  void check_address(const PageAddress& addr) const;
  void check_block(uint32_t plane, uint32_t block) const;

 private:
  uint64_t page_index(const PageAddress& addr) const;
  uint64_t block_index(uint32_t plane, uint32_t block) const;

  ChipGeometry geometry_;
  RberModel rber_model_;
  uint64_t seed_;
  uint64_t sense_counter_ = 0;
  uint32_t max_mws_blocks_ = 4;
  std::unordered_map<uint64_t, PageState> pages_;
  std::vector<LatchBank> latches_;
  std::vector<uint64_t> pe_cycles_;
  std::vector<double> retention_days_;
};

}  // namespace flashbit
