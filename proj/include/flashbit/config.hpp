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

// Experiment configuration (JSON). Every section is optional; missing keys
// keep their defaults.
//
// {
//   "geometry":  {"channels": 8, "dies_per_channel": 8, "planes_per_die": 2,
//                 "blocks_per_plane": 8192, "wordlines_per_block": 48,
//                 "page_bytes": 16384},
//   "timing":    {"t_read_us": 22.5, "t_mws_capped_us": 25, "channel_bw": 1.2e9,
//                 "external_bw": 8e9, "intra_anchors": [[1,1.0], ...], ...},
//   "power":     {"inter_block_scale": [[1,1.0], ...], "read_power_w": 0.05, ...},
//   "rber":      {"slc_randomized": 1e-3, "esp_curve": [[1.0,1e-6], ...], ...},
//   "max_mws_blocks": 4,
//   "workloads": [
//     {"kind": "bmi", "users": 800000000, "months": [1, 12, 36], "activity": 0.5},
//     {"kind": "ims", "images": [10000, 200000]},
//     {"kind": "kcs", "vertices": 32000000, "cliques": 1024, "k": [8, 64]}
//   ],
//   "functional": false
// }

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "flashbit/geometry.hpp"
#include "flashbit/reliability.hpp"
#include "flashbit/timing.hpp"
#include "flashbit/workloads.hpp"

namespace flashbit {

struct ExperimentConfig {
  ChipGeometry geometry = ChipGeometry::standard();
  TimingParams timing;
  PowerParams power;
  RberModel rber;
  uint32_t max_mws_blocks = 4;
  std::vector<WorkloadSpec> workloads;
  bool functional = false;
};

// Throws ConfigError.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

// The sweep used for the end-to-end comparison.
std::vector<WorkloadSpec> default_sweep();

}  // namespace flashbit
