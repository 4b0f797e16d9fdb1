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

#include "flashbit/expr.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

#include "flashbit/error.hpp"

namespace flashbit {

Expr Expr::var(std::string name) { return {ExprOp::Var, std::move(name), {}}; }
Expr Expr::not_(Expr e) { return {ExprOp::Not, {}, {std::move(e)}}; }
Expr Expr::and_(std::vector<Expr> a) { return {ExprOp::And, {}, std::move(a)}; }
Expr Expr::or_(std::vector<Expr> a) { return {ExprOp::Or, {}, std::move(a)}; }
Expr Expr::xor_(Expr a, Expr b) { return {ExprOp::Xor, {}, {std::move(a), std::move(b)}}; }
Expr Expr::xnor(Expr a, Expr b) { return {ExprOp::Xnor, {}, {std::move(a), std::move(b)}}; }
Expr Expr::nand(std::vector<Expr> a) { return {ExprOp::Nand, {}, std::move(a)}; }
Expr Expr::nor(std::vector<Expr> a) { return {ExprOp::Nor, {}, std::move(a)}; }

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Expr parse() {
    skip();
    if (pos_ == s_.size()) throw ParseError("empty expression", pos_);
    Expr e = parse_or();
    skip();
    if (pos_ != s_.size()) throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
    return e;
  }

 private:
  void skip() {
    while (pos_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
        ++pos_;
      } else if (s_[pos_] == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr parse_or() {
    std::vector<Expr> a{parse_xor()};
    while (eat('|')) a.push_back(parse_xor());
    return a.size() == 1 ? std::move(a[0]) : Expr::or_(std::move(a));
  }
  Expr parse_xor() {
    Expr e = parse_and();
    while (eat('^')) e = Expr::xor_(std::move(e), parse_and());
    return e;
  }
  Expr parse_and() {
    std::vector<Expr> a{parse_unary()};
    while (eat('&')) a.push_back(parse_unary());
    return a.size() == 1 ? std::move(a[0]) : Expr::and_(std::move(a));
  }
  Expr parse_unary() {
    skip();
    if (pos_ == s_.size()) throw ParseError("unexpected end of input", pos_);
    if (eat('!')) return Expr::not_(parse_unary());
    if (eat('(')) {
      Expr e = parse_or();
      if (!eat(')')) throw ParseError("expected ')'", pos_);
      return e;
    }
    const size_t start = pos_;
    auto ident = [](char c, bool first) {
      return std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
             (!first && std::isdigit(static_cast<unsigned char>(c)));
    };
    if (!ident(s_[pos_], true)) {
      throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
    }
    while (pos_ < s_.size() && ident(s_[pos_], false)) ++pos_;
    return Expr::var(std::string(s_.substr(start, pos_ - start)));
  }

  std::string_view s_;
  size_t pos_ = 0;
};

void collect(const Expr& e, std::set<std::string>& out) {
  if (e.op == ExprOp::Var) out.insert(e.name);
  for (const auto& a : e.args) collect(a, out);
}

std::string join(const std::vector<Expr>& args, const char* sep) {
  std::string s = "(";
  for (size_t i = 0; i < args.size(); ++i) {
    if (i) s += sep;
    s += to_string(args[i]);
  }
  return s + ")";
}

}  // namespace

Expr parse_expr(std::string_view text) {
  Expr e = Parser(text).parse();
  validate(e);
  return e;
}

std::string to_string(const Expr& e) {
  switch (e.op) {
    case ExprOp::Var: return e.name;
    case ExprOp::Not: return "!" + to_string(e.args.at(0));
    case ExprOp::And: return join(e.args, " & ");
    case ExprOp::Or: return join(e.args, " | ");
    case ExprOp::Xor: return join(e.args, " ^ ");
    case ExprOp::Xnor: return "!" + join(e.args, " ^ ");
    case ExprOp::Nand: return "!" + join(e.args, " & ");
    case ExprOp::Nor: return "!" + join(e.args, " | ");
  }
  return "?";
}

std::vector<std::string> variables(const Expr& e) {
  std::set<std::string> s;
  collect(e, s);
  return {s.begin(), s.end()};
}

size_t depth(const Expr& e) {
  size_t d = 0;
  for (const auto& a : e.args) d = std::max(d, depth(a));
  return e.args.empty() ? 0 : d + 1;
}

void validate(const Expr& e) {
  switch (e.op) {
    case ExprOp::Var:
      if (e.name.empty() || !e.args.empty()) throw std::invalid_argument("malformed variable node");
      return;
    case ExprOp::Not:
      if (e.args.size() != 1) throw std::invalid_argument("NOT takes one argument");
      break;
    case ExprOp::Xor:
    case ExprOp::Xnor:
      if (e.args.size() != 2) throw std::invalid_argument("XOR/XNOR take two arguments");
      break;
    default:
      if (e.args.size() < 2) throw std::invalid_argument("AND/OR/NAND/NOR need at least two arguments");
      break;
  }
  for (const auto& a : e.args) validate(a);
}

BitVector eval(const Expr& e, const VectorMap& vars) {
  switch (e.op) {
    case ExprOp::Var: {
      auto it = vars.find(e.name);
      if (it == vars.end()) throw std::out_of_range("unbound variable " + e.name);
      return it->second;
    }
    case ExprOp::Not: return ~eval(e.args.at(0), vars);
    case ExprOp::Xor: return eval(e.args.at(0), vars) ^ eval(e.args.at(1), vars);
    case ExprOp::Xnor: return ~(eval(e.args.at(0), vars) ^ eval(e.args.at(1), vars));
    default: break;
  }
  const bool is_and = e.op == ExprOp::And || e.op == ExprOp::Nand;
  BitVector acc = eval(e.args.at(0), vars);
  for (size_t i = 1; i < e.args.size(); ++i) {
    if (is_and) acc &= eval(e.args[i], vars);
    else acc |= eval(e.args[i], vars);
  }
  if (e.op == ExprOp::Nand || e.op == ExprOp::Nor) acc.flip();
  return acc;
}

}  // namespace flashbit
