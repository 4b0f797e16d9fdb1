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

#include "flashbit/chip.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "flashbit/error.hpp"
#include "flashbit/sensing.hpp"

namespace flashbit {

ChipState::ChipState(const ChipGeometry& geometry, uint64_t seed, RberModel rber_model)
    : geometry_(geometry), rber_model_(std::move(rber_model)), seed_(seed) {
  geometry_.validate();
  const size_t bits = geometry_.bitlines_per_block();
  latches_.assign(geometry_.planes_per_die, LatchBank{zeros(bits), zeros(bits)});
  const size_t blocks = size_t{geometry_.planes_per_die} * geometry_.blocks_per_plane;
  pe_cycles_.assign(blocks, 0);
  retention_days_.assign(blocks, 0.0);
}

void ChipState::check_block(uint32_t plane, uint32_t block) const {
  if (plane >= geometry_.planes_per_die) {
    throw AddressOutOfRange(fmt::format("plane {} >= {}", plane, geometry_.planes_per_die));
  }
  if (block >= geometry_.blocks_per_plane) {
    throw AddressOutOfRange(fmt::format("block {} >= {}", block, geometry_.blocks_per_plane));
  }
}

void ChipState::check_address(const PageAddress& addr) const {
  check_block(addr.plane, addr.block);
  if (addr.wordline >= geometry_.wordlines_per_block) {
    throw AddressOutOfRange(
        fmt::format("wordline {} >= {}", addr.wordline, geometry_.wordlines_per_block));
  }
}

uint64_t ChipState::block_index(uint32_t plane, uint32_t block) const {
  return uint64_t{plane} * geometry_.blocks_per_plane + block;
}

uint64_t ChipState::page_index(const PageAddress& a) const {
  return block_index(a.plane, a.block) * geometry_.wordlines_per_block + a.wordline;
}

void ChipState::erase_block(uint32_t plane, uint32_t block) {
  check_block(plane, block);
  for (uint32_t wl = 0; wl < geometry_.wordlines_per_block; ++wl) {
    pages_.erase(page_index({plane, block, wl}));
  }
  ++pe_cycles_[block_index(plane, block)];
}

void ChipState::program_page(const PageAddress& addr, const BitVector& data, ProgramMode mode,
                             bool inverted, std::optional<bool> randomized, double tesp_ratio) {
  check_address(addr);
  if (mode == ProgramMode::Erased) throw InvalidTarget("cannot program a page as erased");
  if (data.size() != geometry_.bitlines_per_block()) {
    throw InvalidTarget(fmt::format("page data has {} bits, expected {}", data.size(),
                                    geometry_.bitlines_per_block()));
  }
  const uint64_t idx = page_index(addr);
  if (pages_.count(idx)) {
    throw ProgramOnNonErasedPage(
        fmt::format("page p{} b{} wl{} is not erased", addr.plane, addr.block, addr.wordline));
  }
  PageState st;
  st.mode = mode;
  st.randomized = randomized.value_or(mode != ProgramMode::ESP);
  st.tesp_ratio = mode == ProgramMode::ESP ? tesp_ratio : 1.0;
  st.data = inverted ? ~data : data;
  pages_.emplace(idx, std::move(st));
}

BitVector ChipState::read_page(const PageAddress& addr, bool inverse) {
  check_address(addr);
  MwsTarget t{addr.plane, {{addr.block, uint64_t{1} << addr.wordline}}};
  MwsFlags f;
  f.inverse = inverse;
  f.init_s = f.init_c = f.move_s_to_c = true;
  mws_execute(*this, t, f);
  return latches(addr.plane).c_latch;
}

PageState ChipState::page(const PageAddress& addr) const {
  check_address(addr);
  auto it = pages_.find(page_index(addr));
  if (it == pages_.end()) {
    return PageState{ProgramMode::Erased, 1.0, false, ones(geometry_.bitlines_per_block())};
  }
  return it->second;
}

bool ChipState::is_erased(const PageAddress& addr) const {
  check_address(addr);
  return !pages_.count(page_index(addr));
}

double ChipState::page_error_rate(const PageAddress& addr) const {
  check_address(addr);
  auto it = pages_.find(page_index(addr));
  if (it == pages_.end()) return 0.0;
  const auto& st = it->second;
  const uint64_t b = block_index(addr.plane, addr.block);
  return rber(rber_model_, st.mode, st.randomized, pe_cycles_[b], retention_days_[b],
              st.tesp_ratio);
}

BitVector ChipState::sense_page(const PageAddress& addr, uint64_t sense_id) const {
  check_address(addr);
  const uint64_t idx = page_index(addr);
  auto it = pages_.find(idx);
  if (it == pages_.end()) return ones(geometry_.bitlines_per_block());
  BitVector out = it->second.data;
  inject_in_place(out, page_error_rate(addr), mix_seed(seed_, sense_id, idx));
  return out;
}

LatchBank& ChipState::latches(uint32_t plane) {
  check_block(plane, 0);
  return latches_[plane];
}

const LatchBank& ChipState::latches(uint32_t plane) const {
  check_block(plane, 0);
  return latches_[plane];
}

uint64_t ChipState::pe_cycles(uint32_t plane, uint32_t block) const {
  check_block(plane, block);
  return pe_cycles_[block_index(plane, block)];
}

double ChipState::retention_days(uint32_t plane, uint32_t block) const {
  check_block(plane, block);
  return retention_days_[block_index(plane, block)];
}

void ChipState::set_wear(uint32_t plane, uint32_t block, uint64_t pe_cycles,
                         double retention_days) {
  check_block(plane, block);
  const uint64_t b = block_index(plane, block);
  if (pe_cycles < pe_cycles_[b]) {
    throw ConfigError(fmt::format("P/E count cannot decrease ({} -> {})", pe_cycles_[b], pe_cycles));
  }
  if (retention_days < 0) throw ConfigError("retention must be non-negative");
  pe_cycles_[b] = pe_cycles;
  retention_days_[b] = retention_days;
}

std::vector<std::pair<PageAddress, PageState>> ChipState::programmed_pages() const {
  std::vector<std::pair<PageAddress, PageState>> out;
  out.reserve(pages_.size());
  const uint64_t wls = geometry_.wordlines_per_block;
  for (const auto& [idx, st] : pages_) {
    const uint64_t blk = idx / wls;
    PageAddress a{static_cast<uint32_t>(blk / geometry_.blocks_per_plane),
                  static_cast<uint32_t>(blk % geometry_.blocks_per_plane),
                  static_cast<uint32_t>(idx % wls)};
    out.emplace_back(a, st);
  }
  std::sort(out.begin(), out.end(), [&](const auto& x, const auto& y) {
    return page_index(x.first) < page_index(y.first);
  });
  return out;
}

void ChipState::restore(uint64_t seed, uint64_t sense_counter) {
  seed_ = seed;
  sense_counter_ = sense_counter;
}

void ChipState::set_max_mws_blocks(uint32_t n) {
  if (n < 1 || n > 32) throw ConfigError(fmt::format("max_mws_blocks {} outside [1,32]", n));
  max_mws_blocks_ = n;
}

}  // namespace flashbit
