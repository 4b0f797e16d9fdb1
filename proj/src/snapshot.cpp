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

#include "flashbit/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include <fmt/format.h>

#include "flashbit/error.hpp"

namespace flashbit {
namespace {

constexpr char kMagic[4] = {'F', 'C', 'S', 'M'};

class Writer {
 public:
  void u8(uint8_t v) { out.push_back(v); }
  void le(uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { le(std::bit_cast<uint64_t>(v), 8); }
  void bytes(const std::vector<uint8_t>& b) { out.insert(out.end(), b.begin(), b.end()); }
  std::vector<uint8_t> out;
};

class Reader {
 public:
  explicit Reader(std::span<const uint8_t> b) : b_(b) {}
  uint64_t le(int n) {
    need(n);
    uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= uint64_t{b_[pos_ + i]} << (8 * i);
    pos_ += n;
    return v;
  }
  double f64() { return std::bit_cast<double>(le(8)); }
  std::span<const uint8_t> take(size_t n) {
    need(n);
    auto s = b_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  size_t left() const { return b_.size() - pos_; }

 private:
  void need(size_t n) const {
    if (left() < n) throw SnapshotError(fmt::format("snapshot truncated at byte {}", pos_));
  }
  std::span<const uint8_t> b_;
  size_t pos_ = 0;
};

}  // namespace

std::vector<uint8_t> save_snapshot(const ChipState& chip) {
  const auto& g = chip.geometry();
  Writer p;
  for (uint32_t pl = 0; pl < g.planes_per_die; ++pl) {
    for (uint32_t b = 0; b < g.blocks_per_plane; ++b) {
      p.le(chip.pe_cycles(pl, b), 8);
      p.f64(chip.retention_days(pl, b));
    }
  }
  for (uint32_t pl = 0; pl < g.planes_per_die; ++pl) {
    p.bytes(to_bytes(chip.latches(pl).s_latch));
    p.bytes(to_bytes(chip.latches(pl).c_latch));
  }
  const auto pages = chip.programmed_pages();
  p.le(pages.size(), 8);
  for (const auto& [a, st] : pages) {
    p.le(a.plane, 4);
    p.le(a.block, 4);
    p.le(a.wordline, 4);
    p.u8(static_cast<uint8_t>(st.mode));
    p.u8(st.randomized ? 1 : 0);
    p.f64(st.tesp_ratio);
    p.bytes(to_bytes(st.data));
  }

  Writer h;
  for (char c : kMagic) h.u8(static_cast<uint8_t>(c));
  h.le(kSnapshotVersion, 2);
  h.le(0, 2);
  for (uint32_t v : {g.channels, g.dies_per_channel, g.planes_per_die, g.blocks_per_plane,
                     g.wordlines_per_block, g.page_bytes}) {
    h.le(v, 4);
  }
  h.le(chip.seed(), 8);
  h.le(chip.sense_counter(), 8);
  h.le(chip.max_mws_blocks(), 4);
  h.le(p.out.size(), 8);
  h.bytes(p.out);
  return std::move(h.out);
}

ChipState load_snapshot(std::span<const uint8_t> bytes) {
  Reader r(bytes);
  auto magic = r.take(4);
  if (std::memcmp(magic.data(), kMagic, 4) != 0) throw SnapshotError("bad snapshot magic");
  const auto version = r.le(2);
  if (version != kSnapshotVersion) throw SnapshotError(fmt::format("unsupported snapshot version {}", version));
  const auto flags = r.le(2);
  if (flags & kSnapshotFlagZstd) throw SnapshotError("compressed snapshots are not supported by this build");
  if (flags) throw SnapshotError(fmt::format("unknown snapshot flags {:#x}", flags));
  ChipGeometry g;
  g.channels = static_cast<uint32_t>(r.le(4));
  g.dies_per_channel = static_cast<uint32_t>(r.le(4));
  g.planes_per_die = static_cast<uint32_t>(r.le(4));
  g.blocks_per_plane = static_cast<uint32_t>(r.le(4));
  g.wordlines_per_block = static_cast<uint32_t>(r.le(4));
  g.page_bytes = static_cast<uint32_t>(r.le(4));
  const uint64_t seed = r.le(8);
  const uint64_t counter = r.le(8);
  const auto max_blocks = static_cast<uint32_t>(r.le(4));
  const uint64_t payload = r.le(8);
  if (payload != r.left()) throw SnapshotError("payload size does not match the header");

  ChipState chip = [&] {
    try {
      return ChipState(g, seed);
    } catch (const ConfigError& e) {
      throw SnapshotError(std::string("bad geometry: ") + e.what());
    }
  }();
  chip.set_max_mws_blocks(max_blocks);
  for (uint32_t pl = 0; pl < g.planes_per_die; ++pl) {
    for (uint32_t b = 0; b < g.blocks_per_plane; ++b) {
      const uint64_t pec = r.le(8);
      chip.set_wear(pl, b, pec, r.f64());
    }
  }
  const size_t bits = g.bitlines_per_block();
  const size_t page_len = (bits + 7) / 8;
  for (uint32_t pl = 0; pl < g.planes_per_die; ++pl) {
    chip.latches(pl).s_latch = from_bytes(r.take(page_len), bits);
    chip.latches(pl).c_latch = from_bytes(r.take(page_len), bits);
  }
  const uint64_t n = r.le(8);
  for (uint64_t i = 0; i < n; ++i) {
    PageAddress a;
    a.plane = static_cast<uint32_t>(r.le(4));
    a.block = static_cast<uint32_t>(r.le(4));
    a.wordline = static_cast<uint32_t>(r.le(4));
    const auto mode = static_cast<ProgramMode>(r.le(1));
    if (mode == ProgramMode::Erased || static_cast<uint8_t>(mode) > 4) throw SnapshotError("bad page mode");
    const bool randomized = r.le(1) != 0;
    const double tesp = r.f64();
    try {
      chip.program_page(a, from_bytes(r.take(page_len), bits), mode, false, randomized,
                        mode == ProgramMode::ESP ? tesp : kDefaultTespRatio);
    } catch (const SnapshotError&) {
      throw;
    } catch (const Error& e) {
      throw SnapshotError(std::string("bad page record: ") + e.what());
    }
  }
  if (r.left()) throw SnapshotError("trailing bytes in snapshot payload");
  chip.restore(seed, counter);
  return chip;
}

void save_snapshot_file(const ChipState& chip, const std::string& path) {
  const auto bytes = save_snapshot(chip);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SnapshotError("cannot open " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw SnapshotError("write failed for " + path);
}

ChipState load_snapshot_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotError("cannot open " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return load_snapshot(bytes);
}

}  // namespace flashbit
