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

#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "flashbit/error.hpp"
#include "flashbit/expr.hpp"
#include "flashbit/fuzz.hpp"
#include "oracles.hpp"

using namespace flashbit;

namespace {

std::map<std::string, oracle::Bits> to_bools(const VectorMap& m) {
  std::map<std::string, oracle::Bits> out;
  for (const auto& [k, v] : m) {
    oracle::Bits b(v.size());
    for (size_t i = 0; i < v.size(); ++i) b[i] = v.test(i);
    out[k] = b;
  }
  return out;
}

oracle::Bits bools(const BitVector& v) {
  oracle::Bits b(v.size());
  for (size_t i = 0; i < v.size(); ++i) b[i] = v.test(i);
  return b;
}

}  // namespace

TEST(Parse, PrecedenceAndFlattening) {
  const Expr e = parse_expr("a | b ^ c & !d");
  ASSERT_EQ(e.op, ExprOp::Or);
  ASSERT_EQ(e.args.size(), 2u);
  EXPECT_EQ(e.args[0], Expr::var("a"));
  ASSERT_EQ(e.args[1].op, ExprOp::Xor);
  EXPECT_EQ(e.args[1].args[1], Expr::and_({Expr::var("c"), Expr::not_(Expr::var("d"))}));
  EXPECT_EQ(parse_expr("a & b & c").args.size(), 3u);
  EXPECT_EQ(parse_expr("(a)"), Expr::var("a"));
}

TEST(Parse, XorIsLeftAssociative) {
  const Expr e = parse_expr("a ^ b ^ c");
  EXPECT_EQ(e, Expr::xor_(Expr::xor_(Expr::var("a"), Expr::var("b")), Expr::var("c")));
}

TEST(Parse, CommentsAndWhitespace) {
  EXPECT_EQ(parse_expr("# header\n  x_1 &\n\ty2 # tail\n"), Expr::and_({Expr::var("x_1"), Expr::var("y2")}));
}

TEST(Parse, Errors) {
  for (const char* bad : {"", "   # only a comment", "a &", "(a | b", "a b", "1x", "a $ b", "!", "a)"}) {
    EXPECT_THROW(parse_expr(bad), ParseError) << bad;
  }
  try {
    parse_expr("a & $");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 4u);
  }
}

TEST(Expr, VariablesDepthValidate) {
  const Expr e = parse_expr("(b & a) | !(c ^ a)");
  EXPECT_EQ(variables(e), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(depth(Expr::var("a")), 0u);
  EXPECT_EQ(depth(e), 3u);
  EXPECT_THROW(validate(Expr{ExprOp::Xor, {}, {Expr::var("a")}}), std::invalid_argument);
  EXPECT_THROW(validate(Expr{ExprOp::And, {}, {Expr::var("a")}}), std::invalid_argument);
  EXPECT_THROW(validate(Expr{ExprOp::Not, {}, {}}), std::invalid_argument);
  EXPECT_THROW(validate(Expr{ExprOp::Var, "", {}}), std::invalid_argument);
}

TEST(Expr, EvalAllOperators) {
  VectorMap v{{"a", from_bytes(std::vector<uint8_t>{0b1100}, 4)}, {"b", from_bytes(std::vector<uint8_t>{0b1010}, 4)}};
  auto ev = [&](Expr e) { return to_bytes(eval(e, v))[0]; };
  const Expr a = Expr::var("a"), b = Expr::var("b");
  EXPECT_EQ(ev(Expr::and_({a, b})), 0b1000);
  EXPECT_EQ(ev(Expr::or_({a, b})), 0b1110);
  EXPECT_EQ(ev(Expr::xor_(a, b)), 0b0110);
  EXPECT_EQ(ev(Expr::xnor(a, b)), 0b1001);
  EXPECT_EQ(ev(Expr::nand({a, b})), 0b0111);
  EXPECT_EQ(ev(Expr::nor({a, b})), 0b0001);
  EXPECT_EQ(ev(Expr::not_(a)), 0b0011);
  EXPECT_THROW(eval(Expr::var("z"), v), std::out_of_range);
}

TEST(ExprProperty, PrintParseRoundTripPreservesMeaning) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    const Expr e = random_expr(rng, {12, 4, 4});
    const Expr back = parse_expr(to_string(e));
    VectorMap v;
    for (const auto& n : variables(e)) v[n] = random_bits(64, rng());
    EXPECT_EQ(eval(back, v), eval(e, v)) << to_string(e);
    EXPECT_EQ(variables(back), variables(e));
  }
}

TEST(ExprProperty, EvalAgreesWithReference) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 500; ++i) {
    const Expr e = random_expr(rng);
    EXPECT_NO_THROW(validate(e));
    EXPECT_LE(depth(e), 3u);
    EXPECT_LE(variables(e).size(), 64u);
    VectorMap v;
    for (const auto& n : variables(e)) v[n] = random_bits(40, rng());
    EXPECT_EQ(bools(eval(e, v)), oracle::eval(e, to_bools(v), 40)) << to_string(e);
  }
}
