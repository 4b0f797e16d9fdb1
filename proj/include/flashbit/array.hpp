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

#include "flashbit/chip.hpp"

namespace flashbit {

// Position of one page-sized slice of a striped vector.
struct StripeUnit {
  uint32_t channel = 0;
  uint32_t die = 0;  // within the channel
  uint32_t plane = 0;
  bool operator==(const StripeUnit&) const = default;
};

// All dies of an SSD. Vectors stripe page by page across channels first,
// then dies, then planes.
class FlashArray {
 public:
  explicit FlashArray(const ChipGeometry& geometry, uint64_t seed = 0, const RberModel& rber = {});

  const ChipGeometry& geometry() const { return geometry_; }
  ChipState& chip(uint32_t channel, uint32_t die);
  const ChipState& chip(uint32_t channel, uint32_t die) const;
  ChipState& chip(const StripeUnit& unit) { return chip(unit.channel, unit.die); }
  size_t chip_count() const { return chips_.size(); }

  StripeUnit unit(uint64_t index) const;

  void set_max_mws_blocks(uint32_t n);
  void set_rber_model(const RberModel& model);

 private:
  ChipGeometry geometry_;
  std::vector<ChipState> chips_;
};

}  // namespace flashbit
