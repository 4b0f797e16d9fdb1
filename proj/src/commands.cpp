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

#include "flashbit/commands.hpp"

#include <cctype>
#include <optional>

#include <fmt/format.h>

#include "flashbit/error.hpp"

namespace flashbit {
namespace {

void put_le(std::vector<uint8_t>& out, uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void check_group(const BlockSelect& g) {
  if (g.block > kMaxBlockAddress) {
    throw MalformedFrame(fmt::format("block address {} does not fit in 24 bits", g.block));
  }
  if (g.pbm == 0) throw MalformedFrame("PBM selects no wordline");
  if (g.pbm >> kPbmWidth) throw MalformedFrame("PBM has bits beyond its 48-bit width");
}

class Reader {
 public:
  explicit Reader(std::span<const uint8_t> b) : b_(b) {}
  size_t pos() const { return pos_; }
  size_t left() const { return b_.size() - pos_; }
  uint8_t u8() {
    need(1);
    return b_[pos_++];
  }
  uint64_t le(int n) {
    need(n);
    uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= uint64_t{b_[pos_ + i]} << (8 * i);
    pos_ += n;
    return v;
  }
  std::span<const uint8_t> take(size_t n) {
    need(n);
    auto s = b_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  uint8_t peek() const {
    if (!left()) throw MalformedFrame("truncated frame");
    return b_[pos_];
  }

 private:
  void need(size_t n) const {
    if (left() < n) throw MalformedFrame(fmt::format("truncated frame at byte {}", pos_));
  }
  std::span<const uint8_t> b_;
  size_t pos_ = 0;
};

BlockSelect read_group(Reader& r) {
  BlockSelect g;
  g.block = static_cast<uint32_t>(r.le(3));
  g.pbm = r.le(6);
  check_group(g);
  return g;
}

// esp_payload unset: the payload runs to the last byte of the input.
CommandFrame read_frame(Reader& r, std::optional<size_t> esp_payload) {
  const size_t start = r.pos();
  const uint8_t op = r.u8();
  switch (op) {
    case kOpMws: {
      const uint8_t iscm = r.u8();
      if (iscm & 0xF0) throw MalformedFrame(fmt::format("reserved ISCM bits set: {:#04x}", iscm));
      MwsFrame f;
      f.flags = MwsFlags::from_iscm(iscm);
      f.groups.push_back(read_group(r));
      for (;;) {
        const uint8_t b = r.u8();
        if (b == kConf) break;
        if (b != kCont) {
          throw MalformedFrame(fmt::format("expected 85 or D0 at byte {}, got {:02X}", r.pos() - 1, b));
        }
        if (f.groups.size() == kMaxAddressGroups) {
          throw MalformedFrame("MWS frame carries more than 4 address groups");
        }
        f.groups.push_back(read_group(r));
      }
      return f;
    }
    case kOpEsp: {
      EspFrame f;
      f.block = static_cast<uint32_t>(r.le(3));
      f.wordline = r.u8();
      if (f.wordline >= kMaxWordlinesPerBlock) throw MalformedFrame("ESP wordline out of range");
      size_t n;
      if (esp_payload) {
        n = *esp_payload;
      } else {
        if (r.left() < 1) throw MalformedFrame("truncated ESP frame");
        n = r.left() - 1;
      }
      if (n == 0) throw MalformedFrame("ESP frame without payload");
      auto p = r.take(n);
      f.payload.assign(p.begin(), p.end());
      if (r.u8() != kConf) throw MalformedFrame("ESP frame missing D0");
      return f;
    }
    case kOpXor:
      return XorFrame{r.u8()};
    default:
      throw MalformedFrame(fmt::format("unknown opcode {:02X} at byte {}", op, start));
  }
}

}  // namespace

void encode_into(const CommandFrame& frame, std::vector<uint8_t>& out) {
  if (const auto* m = std::get_if<MwsFrame>(&frame)) {
    if (m->groups.empty() || m->groups.size() > kMaxAddressGroups) {
      throw MalformedFrame(fmt::format("MWS frame needs 1..4 address groups, got {}", m->groups.size()));
    }
    out.push_back(kOpMws);
    out.push_back(m->flags.to_iscm());
    for (size_t i = 0; i < m->groups.size(); ++i) {
      check_group(m->groups[i]);
      if (i) out.push_back(kCont);
      put_le(out, m->groups[i].block, 3);
      put_le(out, m->groups[i].pbm, 6);
    }
    out.push_back(kConf);
  } else if (const auto* e = std::get_if<EspFrame>(&frame)) {
    if (e->block > kMaxBlockAddress) throw MalformedFrame("ESP block address exceeds 24 bits");
    if (e->wordline >= kMaxWordlinesPerBlock) throw MalformedFrame("ESP wordline out of range");
    if (e->payload.empty()) throw MalformedFrame("ESP frame without payload");
    out.push_back(kOpEsp);
    put_le(out, e->block, 3);
    out.push_back(e->wordline);
    out.insert(out.end(), e->payload.begin(), e->payload.end());
    out.push_back(kConf);
  } else {
    out.push_back(kOpXor);
    out.push_back(std::get<XorFrame>(frame).plane);
  }
}

std::vector<uint8_t> encode(const CommandFrame& frame) {
  std::vector<uint8_t> out;
  encode_into(frame, out);
  return out;
}

CommandFrame decode(std::span<const uint8_t> bytes) {
  Reader r(bytes);
  CommandFrame f = read_frame(r, std::nullopt);
  if (r.left()) throw MalformedFrame(fmt::format("{} trailing bytes after frame", r.left()));
  return f;
}

std::vector<CommandFrame> decode_stream(std::span<const uint8_t> bytes, size_t esp_payload_bytes) {
  Reader r(bytes);
  std::vector<CommandFrame> out;
  while (r.left()) out.push_back(read_frame(r, esp_payload_bytes));
  return out;
}

MwsFrame to_frame(const MwsTarget& target, const MwsFlags& flags, const ChipGeometry& geometry) {
  if (target.blocks.size() > kMaxAddressGroups) {
    throw MalformedFrame(fmt::format("{} blocks do not fit one MWS frame", target.blocks.size()));
  }
  MwsFrame f;
  f.flags = flags;
  for (const auto& b : target.blocks) {
    f.groups.push_back(
        {target.plane * geometry.blocks_per_plane + b.block, b.pbm});
  }
  return f;
}

MwsTarget to_target(const MwsFrame& frame, const ChipGeometry& geometry) {
  MwsTarget t;
  const uint64_t limit = uint64_t{geometry.planes_per_die} * geometry.blocks_per_plane;
  for (size_t i = 0; i < frame.groups.size(); ++i) {
    const auto& g = frame.groups[i];
    if (g.block >= limit) throw MalformedFrame(fmt::format("block address {} beyond die", g.block));
    const uint32_t plane = g.block / geometry.blocks_per_plane;
    if (i == 0) {
      t.plane = plane;
    } else if (plane != t.plane) {
      throw MalformedFrame("MWS address groups span planes");
    }
    t.blocks.push_back({g.block % geometry.blocks_per_plane, g.pbm});
  }
  return t;
}

std::string to_hex(std::span<const uint8_t> bytes) {
  std::string s;
  s.reserve(bytes.size() * 2);
  for (uint8_t b : bytes) s += fmt::format("{:02X}", b);
  return s;
}

std::vector<uint8_t> from_hex(std::string_view hex) {
  std::vector<uint8_t> out;
  int hi = -1;
  for (size_t i = 0; i < hex.size(); ++i) {
    const char c = hex[i];
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
    else throw ParseError(fmt::format("bad hex digit '{}'", c), i);
    if (hi < 0) {
      hi = v;
    } else {
      out.push_back(static_cast<uint8_t>(hi << 4 | v));
      hi = -1;
    }
  }
  if (hi >= 0) throw ParseError("odd number of hex digits", hex.size());
  return out;
}

}  // namespace flashbit
