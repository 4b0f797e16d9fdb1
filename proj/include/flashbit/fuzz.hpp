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

// Random expressions and end-to-end runs on toy geometry, shared by the
// `verify` command and the property tests.

#include <cstdint>
#include <random>

#include "flashbit/expr.hpp"
#include "flashbit/planner.hpp"

namespace flashbit {

struct FuzzOptions {
  uint32_t max_vars = 64;
  uint32_t max_depth = 3;
  uint32_t max_arity = 6;
};

Expr random_expr(std::mt19937_64& rng, const FuzzOptions& options = {});

struct FuzzCase {
  Expr expr;
  VectorMap vectors;
  Placement placement;
  Plan plan;
  BitVector result;  // as executed on the simulated chip
};

// Builds a random expression and operands from `seed`, stores them as ESP
// pages on a single-plane toy chip of `bits` bitlines, compiles and executes.
FuzzCase run_fuzz_case(uint64_t seed, uint32_t bits, const FuzzOptions& options = {},
                       const CompileOptions& compile_options = {});

}  // namespace flashbit
