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
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "flashbit/geometry.hpp"

namespace flashbit {

using Anchors = std::vector<std::pair<double, double>>;

// Piecewise-linear interpolation, clamped at both ends.
double interpolate(const Anchors& anchors, double x);

// Durations in microseconds, bandwidths in bytes per second.
struct TimingParams {
  double t_read_us = 22.5;
  double t_mws_capped_us = 25.0;
  uint32_t mws_cap_blocks = 4;
  double t_prog_slc_us = 200.0;
  double t_prog_mlc_us = 500.0;
  double t_prog_tlc_us = 700.0;
  double t_esp_us = 400.0;
  double t_bers_us = 4000.0;
  double channel_bw = 1.2e9;
  double external_bw = 8.0e9;
  // Host CPU and per-channel accelerator throughput; both overlap with I/O.
  double host_bw = 50.0e9;
  double accel_bw = 4.0e9;

  // Sensing latency as a multiple of tR. Intra: by selected wordlines in
  // one block. Inter: by activated blocks, all wordlines selected.
  Anchors intra_anchors = {{1, 1.000}, {8, 1.010}, {48, 1.033}};
  Anchors inter_anchors = {{1, 1.000}, {4, 1.033}, {8, 1.05}, {16, 1.15}, {32, 1.363}};
  uint32_t max_intra_wordlines = 48;
  uint32_t max_inter_blocks = 32;

  double t_prog_us(ProgramMode mode) const;
  void validate() const;
};

// Power relative to a regular single-page read.
struct PowerParams {
  Anchors inter_block_scale = {{1, 1.00}, {2, 1.34}, {4, 1.80}, {8, 2.40}, {16, 3.40}, {32, 5.00}};
  double erase_scale = 1.9;
  double read_power_w = 0.05;           // one plane sensing at scale 1.0
  double isp_accel_pj_per_op = 93.0;    // one 64-byte operation
  double channel_pj_per_bit = 4.0;
  double external_pj_per_bit = 10.0;
  double dram_pj_per_bit = 15.0;
  double host_pj_per_byte = 1000.0;
  double controller_power_w = 1.5;

  double scale(uint32_t blocks) const { return interpolate(inter_block_scale, blocks); }
  void validate() const;
};

// Physical sensing time before the fixed-latency cap.
double tmws_raw(uint32_t intra_wordlines, uint32_t inter_blocks, const TimingParams& params = {});

// Command latency: fixed tMWS up to the cap block count, never below it past
// the cap. Throws std::out_of_range for counts outside the characterized range.
double tmws(uint32_t intra_wordlines, uint32_t inter_blocks, const TimingParams& params = {});

double transfer_us(double bytes, double bandwidth);

// Energy of one n-block MWS (one wordline per block) over n serial reads.
double inter_mws_energy_ratio(uint32_t blocks, const TimingParams& timing = {},
                              const PowerParams& power = {});

enum class SystemModel : uint8_t { OSP, ISP, PB, FC };
inline constexpr SystemModel kAllSystems[] = {SystemModel::OSP, SystemModel::ISP, SystemModel::PB,
                                              SystemModel::FC};
std::string_view to_string(SystemModel system);
SystemModel system_from_string(std::string_view s);

// Sensings of one shape issued per plane per stripe row.
struct SensingGroup {
  uint64_t count = 0;
  uint32_t blocks = 1;
  uint32_t wordlines = 1;  // max selected wordlines in any one block
};

// One bulk bitwise query over equally sized vectors striped across all
// planes. `repeat` identical queries run back to back.
struct QueryProfile {
  std::string name;
  uint64_t vector_bits = 0;
  uint32_t operands = 0;
  std::vector<SensingGroup> pb_sensings;
  std::vector<SensingGroup> fc_sensings;
  // Result pages read out of each plane per row.
  uint32_t pb_readouts = 1;
  uint32_t fc_readouts = 1;
  uint64_t repeat = 1;
};

struct StageBusy {
  double sense_us = 0;     // busiest die
  double channel_us = 0;   // busiest channel
  double external_us = 0;
  double compute_us = 0;   // host or busiest accelerator
};

struct EnergyBreakdown {
  double flash_j = 0;
  double channel_j = 0;
  double external_j = 0;
  double dram_j = 0;
  double compute_j = 0;
  double controller_j = 0;
  double total() const {
    return flash_j + channel_j + external_j + dram_j + compute_j + controller_j;
  }
};

struct TimelineResult {
  double latency_us = 0;
  StageBusy busy;
  EnergyBreakdown energy;
  uint64_t sensings_per_plane = 0;  // over the whole run
  double bytes_channel = 0;
  double bytes_external = 0;
};

TimelineResult simulate_timeline(std::span<const QueryProfile> queries, SystemModel system,
                                 const ChipGeometry& geometry, const TimingParams& timing = {},
                                 const PowerParams& power = {});

EnergyBreakdown energy_of(std::span<const QueryProfile> queries, SystemModel system,
                          const ChipGeometry& geometry, const TimingParams& timing = {},
                          const PowerParams& power = {});

// Accelerator energy for combining `operands` vectors of `bytes` each.
double isp_accel_energy_j(double bytes, uint32_t operands, const PowerParams& power = {});

}  // namespace flashbit
