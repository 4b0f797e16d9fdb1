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

#include "flashbit/array.hpp"

#include <fmt/format.h>

#include "flashbit/error.hpp"

namespace flashbit {

FlashArray::FlashArray(const ChipGeometry& geometry, uint64_t seed, const RberModel& rber)
    : geometry_(geometry) {
  geometry_.validate();
  chips_.reserve(geometry_.dies());
  for (uint32_t ch = 0; ch < geometry_.channels; ++ch) {
    for (uint32_t d = 0; d < geometry_.dies_per_channel; ++d) {
      chips_.emplace_back(geometry_, mix_seed(seed, ch, d), rber);
    }
  }
}

ChipState& FlashArray::chip(uint32_t channel, uint32_t die) {
  if (channel >= geometry_.channels || die >= geometry_.dies_per_channel) {
    throw AddressOutOfRange(fmt::format("no die {} on channel {}", die, channel));
  }
  return chips_[size_t{channel} * geometry_.dies_per_channel + die];
}

const ChipState& FlashArray::chip(uint32_t channel, uint32_t die) const {
  return const_cast<FlashArray*>(this)->chip(channel, die);
}

StripeUnit FlashArray::unit(uint64_t index) const {
  const uint64_t c = geometry_.channels;
  const uint64_t d = geometry_.dies_per_channel;
  const uint64_t u = index % (c * d * geometry_.planes_per_die);
  return {static_cast<uint32_t>(u % c), static_cast<uint32_t>((u / c) % d),
          static_cast<uint32_t>(u / (c * d))};
}

void FlashArray::set_max_mws_blocks(uint32_t n) {
  for (auto& c : chips_) c.set_max_mws_blocks(n);
}

void FlashArray::set_rber_model(const RberModel& model) {
  for (auto& c : chips_) c.set_rber_model(model);
}

}  // namespace flashbit
