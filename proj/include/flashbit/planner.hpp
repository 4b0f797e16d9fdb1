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
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "flashbit/array.hpp"
#include "flashbit/commands.hpp"
#include "flashbit/expr.hpp"
#include "flashbit/timing.hpp"

namespace flashbit {

// Location of row 0 of a vector. Row r of the same vector sits in block
// `block + r * template_blocks` of every plane it stripes over.
struct VarLocation {
  uint32_t block = 0;
  uint32_t wordline = 0;
  bool stored_inverted = false;
  ProgramMode mode = ProgramMode::ESP;
  double tesp_ratio = kDefaultTespRatio;
  bool operator==(const VarLocation&) const = default;
};

// Operands that should share a block. Inverted groups serve OR through an
// inverse intra-block sensing.
struct PlacementHint {
  std::vector<std::string> vars;
  bool inverted = false;
  bool operator==(const PlacementHint&) const = default;
};

struct PlacementOptions {
  ProgramMode mode = ProgramMode::ESP;
  double tesp_ratio = kDefaultTespRatio;
};

struct Placement {
  ChipGeometry geometry;
  uint64_t vector_bits = 0;
  uint32_t template_blocks = 0;
  std::map<std::string, VarLocation> vars;

  uint64_t pages() const;
  uint64_t rows() const;
  uint32_t row_block(uint32_t template_block, uint64_t row) const {
    return static_cast<uint32_t>(row * template_blocks + template_block);
  }
  // Throws CapacityExceeded / InvalidTarget.
  void validate() const;
};

// Groups the leaves of each And node so they read back as cell values (plain
// leaves direct, negated leaves inverted) and the leaves of each Or node with
// at least one same-polarity sibling the other way round. Each variable joins
// the first group that claims it.
std::vector<PlacementHint> derive_hints(const Expr& e);
std::vector<PlacementHint> derive_hints(std::span<const Expr> exprs);

// Every hint group starts on a fresh block and spills into following blocks
// every `addressable_wordlines` operands. Variables not covered by a hint are
// packed afterwards in address order. Throws CapacityExceeded.
Placement place(std::span<const std::string> vars, std::span<const PlacementHint> hints,
                const ChipGeometry& geometry, uint64_t vector_bits,
                const PlacementOptions& options = {});

// Erases the touched blocks and programs every vector, honoring polarity.
void store(FlashArray& array, const Placement& placement, const VectorMap& vectors);

// Reads a stored vector back in its original polarity.
BitVector load(FlashArray& array, const Placement& placement, const std::string& name);

enum class HostOp : uint8_t { And, Or, Xor };

struct FrameStep {
  CommandFrame frame;
};
// Copies the cache latch out to temporary `temp`.
struct ReadoutStep {
  uint32_t temp = 0;
};
// Combines temporaries on the host.
struct HostStep {
  HostOp op = HostOp::And;
  std::vector<uint32_t> inputs;
  uint32_t output = 0;
};
using PlanStep = std::variant<FrameStep, ReadoutStep, HostStep>;

struct Plan {
  SystemModel system = SystemModel::FC;
  // Frames address plane 0, stripe row 0.
  std::vector<PlanStep> steps;
  uint32_t temps = 0;
  uint32_t result = 0;
  bool host_fallback = false;
  std::vector<std::string> notes;
};

struct CompileOptions {
  // false emits one wordline per sensing.
  bool multi_wordline = true;
  uint32_t max_blocks_per_frame = 4;
  bool host_fallback = true;
};

// Throws UnsupportedShape when the expression needs host combination and
// fallback is disabled, std::out_of_range for unplaced variables.
Plan compile(const Expr& e, const Placement& placement, const CompileOptions& options = {});

struct PlanStats {
  uint64_t sensings = 0;
  uint64_t frames = 0;
  uint64_t xor_frames = 0;
  uint64_t readouts = 0;
  uint64_t host_ops = 0;
  uint64_t chains = 0;  // S-latch accumulation chains
  std::map<uint32_t, uint64_t> blocks_per_frame;
  uint32_t max_wordlines = 0;
  std::vector<uint32_t> blocks_touched;
  bool operator==(const PlanStats&) const = default;
};

PlanStats plan_stats(const Plan& plan, const ChipGeometry& geometry);

// Per-row sensing shapes for the timing model.
std::vector<SensingGroup> sensing_profile(const Plan& plan, const ChipGeometry& geometry);

// Runs the plan on every stripe unit and row and assembles the result.
BitVector execute(const Plan& plan, FlashArray& array, const Placement& placement);

std::vector<uint8_t> encode_plan(const Plan& plan);
nlohmann::json plan_to_json(const Plan& plan, const Placement& placement);
std::string describe(const Plan& plan, const ChipGeometry& geometry);

}  // namespace flashbit
