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

#include "flashbit/timing.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "flashbit/error.hpp"

namespace flashbit {

double interpolate(const Anchors& a, double x) {
  if (a.empty()) throw std::invalid_argument("interpolate: no anchors");
  if (x <= a.front().first) return a.front().second;
  if (x >= a.back().first) return a.back().second;
  auto hi = std::upper_bound(a.begin(), a.end(), x,
                             [](double v, const auto& p) { return v < p.first; });
  auto lo = hi - 1;
  const double t = (x - lo->first) / (hi->first - lo->first);
  return lo->second + t * (hi->second - lo->second);
}

namespace {

void check_anchors(const Anchors& a, const char* name) {
  if (a.empty()) throw ConfigError(fmt::format("{}: no anchors", name));
  for (size_t i = 1; i < a.size(); ++i) {
    if (a[i].first <= a[i - 1].first || a[i].second < a[i - 1].second) {
      throw ConfigError(fmt::format("{}: anchors must ascend and be non-decreasing", name));
    }
  }
}

}  // namespace

double TimingParams::t_prog_us(ProgramMode mode) const {
  switch (mode) {
    case ProgramMode::SLC: return t_prog_slc_us;
    case ProgramMode::ESP: return t_esp_us;
    case ProgramMode::MLC: return t_prog_mlc_us;
    case ProgramMode::TLC: return t_prog_tlc_us;
    case ProgramMode::Erased: return 0.0;
  }
  return 0.0;
}

void TimingParams::validate() const {
  for (double v : {t_read_us, t_mws_capped_us, t_prog_slc_us, t_prog_mlc_us, t_prog_tlc_us,
                   t_esp_us, t_bers_us, channel_bw, external_bw, host_bw, accel_bw}) {
    if (!(v > 0)) throw ConfigError("timing parameters must be positive");
  }
  if (mws_cap_blocks < 1) throw ConfigError("mws_cap_blocks must be >= 1");
  check_anchors(intra_anchors, "intra_anchors");
  check_anchors(inter_anchors, "inter_anchors");
  if (t_mws_capped_us < t_read_us * interpolate(inter_anchors, mws_cap_blocks)) {
    throw ConfigError("capped tMWS must cover the raw sensing time at the cap");
  }
}

void PowerParams::validate() const {
  check_anchors(inter_block_scale, "inter_block_scale");
  if (std::abs(interpolate(inter_block_scale, 1) - 1.0) > 1e-12) {
    throw ConfigError("inter_block_scale(1) must be 1.0");
  }
  for (double v : {erase_scale, read_power_w, isp_accel_pj_per_op, channel_pj_per_bit,
                   external_pj_per_bit, dram_pj_per_bit, host_pj_per_byte, controller_power_w}) {
    if (v < 0) throw ConfigError("power parameters must be non-negative");
  }
}

double tmws_raw(uint32_t intra, uint32_t inter, const TimingParams& p) {
  if (intra < 1 || intra > p.max_intra_wordlines || inter < 1 || inter > p.max_inter_blocks) {
    throw std::out_of_range(fmt::format("tMWS({}, {}) outside the characterized range", intra, inter));
  }
  return p.t_read_us * std::max(interpolate(p.intra_anchors, intra), interpolate(p.inter_anchors, inter));
}

double tmws(uint32_t intra, uint32_t inter, const TimingParams& p) {
  const double raw = tmws_raw(intra, inter, p);
  if (inter <= p.mws_cap_blocks) return p.t_mws_capped_us;
  return std::max(p.t_mws_capped_us, raw);
}

double transfer_us(double bytes, double bandwidth) { return bytes / bandwidth * 1e6; }

double inter_mws_energy_ratio(uint32_t blocks, const TimingParams& t, const PowerParams& p) {
  const double mws = p.scale(blocks) * tmws_raw(1, blocks, t);
  const double serial = blocks * tmws_raw(1, 1, t);
  return mws / serial;
}

std::string_view to_string(SystemModel s) {
  switch (s) {
    case SystemModel::OSP: return "OSP";
    case SystemModel::ISP: return "ISP";
    case SystemModel::PB: return "PB";
    case SystemModel::FC: return "FC";
  }
  return "?";
}

SystemModel system_from_string(std::string_view s) {
  std::string up(s);
  for (auto& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (auto m : kAllSystems) {
    if (to_string(m) == up) return m;
  }
  throw ConfigError(fmt::format("unknown system '{}'", s));
}

double isp_accel_energy_j(double bytes, uint32_t operands, const PowerParams& power) {
  if (operands < 2) return 0.0;
  return bytes / 64.0 * power.isp_accel_pj_per_op * 1e-12 * (operands - 1);
}

TimelineResult simulate_timeline(std::span<const QueryProfile> queries, SystemModel system,
                                 const ChipGeometry& g, const TimingParams& t,
                                 const PowerParams& pw) {
  g.validate();
  TimelineResult res;
  const uint64_t units = g.planes_total();
  const double page_bytes = g.page_bytes;
  double items = 0;
  double flash_j = 0, compute_j = 0;

  for (const auto& q : queries) {
    if (q.vector_bits == 0 || q.repeat == 0) continue;
    const uint64_t pages = (q.vector_bits + g.bitlines_per_block() - 1) / g.bitlines_per_block();
    auto unit_pages = [&](uint64_t u) { return pages / units + (u < pages % units ? 1 : 0); };
    const uint64_t rows = unit_pages(0);
    // Die (0,0) and channel 0 hold the most pages under round-robin striping.
    uint64_t chan0_pages = 0;
    for (uint64_t u = 0; u < units; u += g.channels) chan0_pages += unit_pages(u);

    struct Sense {
      uint64_t count;
      double us;
      double joules;
    };
    std::vector<Sense> senses;
    uint32_t pages_out = 1;
    switch (system) {
      case SystemModel::OSP:
      case SystemModel::ISP:
        senses.push_back({q.operands, t.t_read_us, pw.read_power_w * t.t_read_us * 1e-6});
        pages_out = q.operands;
        break;
      case SystemModel::PB:
        for (const auto& s : q.pb_sensings) {
          senses.push_back({s.count, t.t_read_us, pw.read_power_w * pw.scale(s.blocks) * t.t_read_us * 1e-6});
        }
        pages_out = q.pb_readouts;
        break;
      case SystemModel::FC:
        for (const auto& s : q.fc_sensings) {
          senses.push_back({s.count, tmws(s.wordlines, s.blocks, t),
                            pw.read_power_w * pw.scale(s.blocks) * tmws_raw(s.wordlines, s.blocks, t) * 1e-6});
        }
        pages_out = q.fc_readouts;
        break;
    }
    const double r = static_cast<double>(q.repeat);
    double row_sense_us = 0;
    uint64_t row_sensings = 0;
    for (const auto& s : senses) {
      row_sense_us += s.count * s.us;
      row_sensings += s.count;
      flash_j += r * pages * s.count * s.joules;
    }
    const double vec_bytes = pages * page_bytes;
    const double chan_bytes = vec_bytes * pages_out;
    double ext_bytes = vec_bytes;
    if (system == SystemModel::OSP) ext_bytes = chan_bytes;
    if (system == SystemModel::PB || system == SystemModel::FC) ext_bytes = chan_bytes;

    res.busy.sense_us += r * rows * row_sense_us;
    res.busy.channel_us += r * transfer_us(chan0_pages * pages_out * page_bytes, t.channel_bw);
    res.busy.external_us += r * transfer_us(ext_bytes, t.external_bw);
    switch (system) {
      case SystemModel::OSP:
        res.busy.compute_us += r * transfer_us(chan_bytes, t.host_bw);
        compute_j += r * chan_bytes * pw.host_pj_per_byte * 1e-12;
        break;
      case SystemModel::ISP:
        res.busy.compute_us += r * transfer_us(chan0_pages * pages_out * page_bytes, t.accel_bw);
        compute_j += r * isp_accel_energy_j(vec_bytes, q.operands, pw);
        break;
      default:
        if (pages_out > 1) {
          res.busy.compute_us += r * transfer_us(chan_bytes, t.host_bw);
          compute_j += r * chan_bytes * pw.host_pj_per_byte * 1e-12;
        }
        break;
    }
    res.sensings_per_plane += q.repeat * rows * row_sensings;
    res.bytes_channel += r * chan_bytes;
    res.bytes_external += r * ext_bytes;
    items += r * rows;
  }
  if (items == 0) return res;

  const std::array<double, 4> busy = {res.busy.sense_us, res.busy.channel_us, res.busy.external_us,
                                      res.busy.compute_us};
  const size_t bottleneck = std::max_element(busy.begin(), busy.end()) - busy.begin();
  res.latency_us = busy[bottleneck];
  // Fill and drain: one item passes through every other stage once.
  for (size_t i = 0; i < busy.size(); ++i) {
    if (i != bottleneck) res.latency_us += busy[i] / items;
  }

  auto& e = res.energy;
  e.flash_j = flash_j;
  e.channel_j = res.bytes_channel * 8 * pw.channel_pj_per_bit * 1e-12;
  e.external_j = res.bytes_external * 8 * pw.external_pj_per_bit * 1e-12;
  e.dram_j = res.bytes_external * 8 * pw.dram_pj_per_bit * 1e-12;
  e.compute_j = compute_j;
  e.controller_j = pw.controller_power_w * res.latency_us * 1e-6;
  return res;
}

EnergyBreakdown energy_of(std::span<const QueryProfile> queries, SystemModel system,
                          const ChipGeometry& geometry, const TimingParams& timing,
                          const PowerParams& power) {
  return simulate_timeline(queries, system, geometry, timing, power).energy;
}

}  // namespace flashbit
