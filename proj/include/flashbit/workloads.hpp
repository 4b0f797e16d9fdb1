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
#include <string>
#include <variant>
#include <vector>

#include "flashbit/expr.hpp"
#include "flashbit/planner.hpp"
#include "flashbit/reliability.hpp"
#include "flashbit/timing.hpp"

namespace flashbit {

// "Users active every day of the past `months` months": AND over the daily
// activity vectors, then a host-side bit count.
struct BmiSpec {
  uint64_t users = 800'000'000;
  uint32_t months = 1;
  double activity = 0.5;
};

struct ColorClass {
  uint8_t y_lo = 0, y_hi = 255;
  uint8_t u_lo = 0, u_hi = 255;
  uint8_t v_lo = 0, v_hi = 255;
};

// YUV color segmentation: pixel p is in class C iff Y(p,C) & U(p,C) & V(p,C).
// Vector bit index = pixel * colors + class.
struct ImsSpec {
  uint64_t images = 10'000;
  uint32_t width = 800;
  uint32_t height = 600;
  uint32_t colors = 4;
  std::vector<ColorClass> classes;  // empty: random thresholds per seed
};

// k-clique star listing: star(C) = AND(adj(v) for v in C) | members(C).
struct KcsSpec {
  uint64_t vertices = 32'000'000;
  uint32_t cliques = 1024;
  uint32_t k = 8;
  double edge_probability = 0.05;
};

using WorkloadSpec = std::variant<BmiSpec, ImsSpec, KcsSpec>;

std::string workload_name(const WorkloadSpec& spec);
// The swept parameter: months, images or k.
std::string workload_param(const WorkloadSpec& spec);

// Days in the past `months` months.
uint32_t bmi_days(uint32_t months);
uint64_t vector_bits(const WorkloadSpec& spec);

struct GeneratedWorkload {
  VectorMap vectors;
  std::vector<Expr> queries;
  std::vector<BitVector> expected;  // oracle result per query
  std::optional<uint64_t> expected_count;  // BMI bit count
};

GeneratedWorkload generate(const WorkloadSpec& spec, uint64_t seed);

// Analytic per-query cost at `geometry`, derived from compiled plan shapes.
std::vector<QueryProfile> profile(const WorkloadSpec& spec, const ChipGeometry& geometry,
                                  uint32_t max_blocks_per_frame = 4);

struct RunOptions {
  ChipGeometry geometry = ChipGeometry::standard();
  TimingParams timing;
  PowerParams power;
  RberModel rber;
  uint64_t seed = 0;
  // Generate, store and execute the data; otherwise timing only.
  bool functional = false;
  // Storage mode used by the in-flash systems in functional runs.
  ProgramMode pb_mode = ProgramMode::SLC;
  ProgramMode fc_mode = ProgramMode::ESP;
};

struct RunResult {
  std::string workload;
  std::string param;
  SystemModel system = SystemModel::FC;
  TimelineResult timeline;
  bool checked = false;
  bool correct = false;
  uint64_t bit_errors = 0;
  std::optional<uint64_t> count;  // BMI
};

// Throws OracleMismatch when a system that guarantees exact results (OSP,
// ISP, FC on ESP pages) disagrees with the oracle.
RunResult run(const WorkloadSpec& spec, SystemModel system, const RunOptions& options);

}  // namespace flashbit
