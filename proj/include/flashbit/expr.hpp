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

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "flashbit/bitvec.hpp"

namespace flashbit {

enum class ExprOp : uint8_t { Var, Not, And, Or, Xor, Xnor, Nand, Nor };

// Boolean expression over named bit-vectors. And/Or/Nand/Nor take two or
// more arguments; Xor/Xnor exactly two; Not one.
struct Expr {
  ExprOp op = ExprOp::Var;
  std::string name;
  std::vector<Expr> args;

  static Expr var(std::string name);
  static Expr not_(Expr e);
  static Expr and_(std::vector<Expr> args);
  static Expr or_(std::vector<Expr> args);
  static Expr xor_(Expr a, Expr b);
  static Expr xnor(Expr a, Expr b);
  static Expr nand(std::vector<Expr> args);
  static Expr nor(std::vector<Expr> args);

  bool operator==(const Expr&) const = default;
};

using VectorMap = std::map<std::string, BitVector>;

// Grammar, loosest binding first:
//   or  := xor ('|' xor)*
//   xor := and ('^' and)*
//   and := unary ('&' unary)*
//   unary := '!' unary | '(' or ')' | identifier
// '#' starts a comment that runs to end of line. Chains of one operator
// flatten into a single n-ary node.
Expr parse_expr(std::string_view text);

std::string to_string(const Expr& e);

// Sorted, unique.
std::vector<std::string> variables(const Expr& e);

size_t depth(const Expr& e);

// Throws std::invalid_argument on arity violations.
void validate(const Expr& e);

// Throws std::out_of_range for unbound variables.
BitVector eval(const Expr& e, const VectorMap& vars);

}  // namespace flashbit
