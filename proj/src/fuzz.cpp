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

#include "flashbit/fuzz.hpp"

#include <fmt/format.h>

#include "flashbit/error.hpp"

namespace flashbit {
namespace {

Expr gen(std::mt19937_64& rng, const FuzzOptions& o, uint32_t nvars, uint32_t depth) {
  auto pick = [&](uint32_t lo, uint32_t hi) {
    return std::uniform_int_distribution<uint32_t>(lo, hi)(rng);
  };
  if (depth == 0 || pick(0, 9) < 2) return Expr::var(fmt::format("v{}", pick(0, nvars - 1)));
  auto kids = [&](uint32_t n) {
    std::vector<Expr> a;
    for (uint32_t i = 0; i < n; ++i) a.push_back(gen(rng, o, nvars, depth - 1));
    return a;
  };
  const uint32_t arity = pick(2, std::max(2u, o.max_arity));
  switch (pick(0, 6)) {
    case 0: return Expr::not_(gen(rng, o, nvars, depth - 1));
    case 1: return Expr::and_(kids(arity));
    case 2: return Expr::or_(kids(arity));
    case 3: return Expr::xor_(gen(rng, o, nvars, depth - 1), gen(rng, o, nvars, depth - 1));
    case 4: return Expr::xnor(gen(rng, o, nvars, depth - 1), gen(rng, o, nvars, depth - 1));
    case 5: return Expr::nand(kids(arity));
    default: return Expr::nor(kids(arity));
  }
}

}  // namespace

Expr random_expr(std::mt19937_64& rng, const FuzzOptions& options) {
  const uint32_t nvars = std::uniform_int_distribution<uint32_t>(1, std::max(1u, options.max_vars))(rng);
  return gen(rng, options, nvars, options.max_depth);
}

FuzzCase run_fuzz_case(uint64_t seed, uint32_t bits, const FuzzOptions& options,
                       const CompileOptions& compile_options) {
  if (bits == 0 || bits % 8) throw ConfigError("fuzz page width must be a positive multiple of 8 bits");
  std::mt19937_64 rng(seed);
  FuzzCase c;
  c.expr = random_expr(rng, options);
  const auto names = variables(c.expr);
  for (size_t i = 0; i < names.size(); ++i) c.vectors[names[i]] = random_bits(bits, mix_seed(seed, i, 1));
  // One fresh block per hint group at most, plus packing of the rest.
  const auto g = ChipGeometry::toy(bits / 8, 2 * static_cast<uint32_t>(names.size()) + 2);
  c.placement = place(names, derive_hints(c.expr), g, bits);
  FlashArray array(g, seed);
  store(array, c.placement, c.vectors);
  c.plan = compile(c.expr, c.placement, compile_options);
  c.result = execute(c.plan, array, c.placement);
  return c;
}

}  // namespace flashbit
