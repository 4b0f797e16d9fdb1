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

#include "flashbit/planner.hpp"

#include <algorithm>
#include <bit>
#include <optional>
#include <set>
#include <stdexcept>
#include <tuple>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "flashbit/error.hpp"
#include "flashbit/sensing.hpp"

namespace flashbit {

// ---------------------------------------------------------------- placement

uint64_t Placement::pages() const {
  const uint64_t bits = geometry.bitlines_per_block();
  return (vector_bits + bits - 1) / bits;
}

uint64_t Placement::rows() const {
  const uint64_t u = geometry.planes_total();
  return (pages() + u - 1) / u;
}

void Placement::validate() const {
  if (uint64_t{template_blocks} * rows() > geometry.blocks_per_plane) {
    throw CapacityExceeded(fmt::format("{} blocks x {} rows exceed {} blocks per plane",
                                       template_blocks, rows(), geometry.blocks_per_plane));
  }
  for (const auto& [name, loc] : vars) {
    if (loc.block >= template_blocks || loc.wordline >= geometry.addressable_wordlines()) {
      throw InvalidTarget(fmt::format("variable {} placed outside the template", name));
    }
  }
}

namespace {

// Negation normal form. Literals carry their polarity; Nand/Nor/Xnor are
// expanded; nested And/Or chains are flattened.
struct Node {
  enum Kind { Lit, And, Or, Xor } kind = Lit;
  std::string var;
  bool neg = false;
  std::vector<Node> kids;
};

Node nnf(const Expr& e, bool negate) {
  auto nary = [&](bool is_and, bool neg_kids) {
    // De Morgan flips the connective under negation.
    Node n;
    n.kind = (is_and != negate) ? Node::And : Node::Or;
    for (const auto& a : e.args) {
      Node k = nnf(a, neg_kids != negate);
      if (k.kind == n.kind) {
        for (auto& kk : k.kids) n.kids.push_back(std::move(kk));
      } else {
        n.kids.push_back(std::move(k));
      }
    }
    return n;
  };
  switch (e.op) {
    case ExprOp::Var: return Node{Node::Lit, e.name, negate, {}};
    case ExprOp::Not: return nnf(e.args.at(0), !negate);
    case ExprOp::And: return nary(true, false);
    case ExprOp::Or: return nary(false, false);
    // !(a & b) = !a | !b, so Nand is an Or over negated kids.
    case ExprOp::Nand: {
      Node n;
      n.kind = negate ? Node::And : Node::Or;
      for (const auto& a : e.args) {
        Node k = nnf(a, !negate);
        if (k.kind == n.kind) {
          for (auto& kk : k.kids) n.kids.push_back(std::move(kk));
        } else {
          n.kids.push_back(std::move(k));
        }
      }
      return n;
    }
    case ExprOp::Nor: {
      Node n;
      n.kind = negate ? Node::Or : Node::And;
      for (const auto& a : e.args) {
        Node k = nnf(a, !negate);
        if (k.kind == n.kind) {
          for (auto& kk : k.kids) n.kids.push_back(std::move(kk));
        } else {
          n.kids.push_back(std::move(k));
        }
      }
      return n;
    }
    case ExprOp::Xor:
    case ExprOp::Xnor: {
      const bool flip = negate != (e.op == ExprOp::Xnor);
      Node n;
      n.kind = Node::Xor;
      n.kids.push_back(nnf(e.args.at(0), flip));
      n.kids.push_back(nnf(e.args.at(1), false));
      return n;
    }
  }
  throw std::invalid_argument("bad expression node");
}

void hints_of(const Node& n, std::vector<PlacementHint>& out) {
  if (n.kind == Node::And || n.kind == Node::Or) {
    std::vector<std::string> pos, neg;
    for (const auto& k : n.kids) {
      if (k.kind != Node::Lit) continue;
      auto& v = k.neg ? neg : pos;
      if (std::find(v.begin(), v.end(), k.var) == v.end()) v.push_back(k.var);
    }
    if (n.kind == Node::And) {
      // Stored so that every literal reads back as the cell value.
      if (!pos.empty()) out.push_back({pos, false});
      if (!neg.empty()) out.push_back({neg, true});
    } else {
      if (pos.size() >= 2) out.push_back({pos, true});
      if (neg.size() >= 2) out.push_back({neg, false});
    }
  }
  for (const auto& k : n.kids) hints_of(k, out);
}

}  // namespace

std::vector<PlacementHint> derive_hints(std::span<const Expr> exprs) {
  std::vector<PlacementHint> raw;
  for (const auto& e : exprs) hints_of(nnf(e, false), raw);
  std::set<std::string> claimed;
  std::vector<PlacementHint> out;
  for (auto& h : raw) {
    PlacementHint kept{{}, h.inverted};
    for (auto& v : h.vars) {
      if (claimed.insert(v).second) kept.vars.push_back(v);
    }
    if (!kept.vars.empty()) out.push_back(std::move(kept));
  }
  return out;
}

std::vector<PlacementHint> derive_hints(const Expr& e) {
  return derive_hints(std::span<const Expr>(&e, 1));
}

Placement place(std::span<const std::string> vars, std::span<const PlacementHint> hints,
                const ChipGeometry& geometry, uint64_t vector_bits,
                const PlacementOptions& options) {
  geometry.validate();
  Placement p;
  p.geometry = geometry;
  p.vector_bits = vector_bits;
  const std::set<std::string> wanted(vars.begin(), vars.end());
  const uint32_t per_block = geometry.addressable_wordlines();
  uint32_t block = 0, wl = 0;
  auto put = [&](const std::string& v, bool inverted) {
    p.vars[v] = {block, wl, inverted, options.mode, options.tesp_ratio};
    if (++wl == per_block) {
      ++block;
      wl = 0;
    }
  };
  auto fresh_block = [&] {
    if (wl) {
      ++block;
      wl = 0;
    }
  };
  for (const auto& h : hints) {
    fresh_block();
    for (const auto& v : h.vars) {
      if (wanted.count(v) && !p.vars.count(v)) put(v, h.inverted);
    }
  }
  fresh_block();
  for (const auto& v : vars) {
    if (!p.vars.count(v)) put(v, false);
  }
  p.template_blocks = block + (wl ? 1 : 0);
  p.validate();
  return p;
}

namespace {

// Stripe page p of a vector lives on unit p % U, row p / U.
struct PageSlot {
  StripeUnit unit;
  uint64_t row;
};

PageSlot slot(const FlashArray& array, uint64_t page) {
  return {array.unit(page), page / array.geometry().planes_total()};
}

BitVector slice(const BitVector& v, uint64_t page, size_t bits) {
  BitVector out(bits);
  const uint64_t start = page * bits;
  const uint64_t end = std::min<uint64_t>(v.size(), start + bits);
  for (uint64_t i = start; i < end; ++i) {
    if (v.test(i)) out.set(i - start);
  }
  return out;
}

void check_geometry(const FlashArray& array, const Placement& placement) {
  if (!(array.geometry() == placement.geometry)) {
    throw InvalidTarget("placement geometry does not match the array");
  }
}

}  // namespace

void store(FlashArray& array, const Placement& placement, const VectorMap& vectors) {
  check_geometry(array, placement);
  placement.validate();
  const auto& g = placement.geometry;
  const uint64_t pages = placement.pages();
  // Erase every block the template touches on every unit that holds a page.
  std::set<std::tuple<uint32_t, uint32_t, uint32_t, uint32_t>> erased;
  for (uint64_t p = 0; p < pages; ++p) {
    const auto s = slot(array, p);
    for (uint32_t b = 0; b < placement.template_blocks; ++b) {
      const uint32_t blk = placement.row_block(b, s.row);
      if (erased.insert({s.unit.channel, s.unit.die, s.unit.plane, blk}).second) {
        array.chip(s.unit).erase_block(s.unit.plane, blk);
      }
    }
  }
  for (const auto& [name, loc] : placement.vars) {
    auto it = vectors.find(name);
    if (it == vectors.end()) throw std::out_of_range("no data for variable " + name);
    if (it->second.size() != placement.vector_bits) {
      throw InvalidTarget(fmt::format("vector {} has {} bits, expected {}", name,
                                      it->second.size(), placement.vector_bits));
    }
    for (uint64_t p = 0; p < pages; ++p) {
      const auto s = slot(array, p);
      array.chip(s.unit).program_page({s.unit.plane, placement.row_block(loc.block, s.row), loc.wordline},
                                      slice(it->second, p, g.bitlines_per_block()), loc.mode,
                                      loc.stored_inverted, std::nullopt, loc.tesp_ratio);
    }
  }
}

BitVector load(FlashArray& array, const Placement& placement, const std::string& name) {
  check_geometry(array, placement);
  const auto& loc = placement.vars.at(name);
  const size_t bits = placement.geometry.bitlines_per_block();
  BitVector out(placement.vector_bits);
  for (uint64_t p = 0; p < placement.pages(); ++p) {
    const auto s = slot(array, p);
    BitVector page = array.chip(s.unit).read_page(
        {s.unit.plane, placement.row_block(loc.block, s.row), loc.wordline}, loc.stored_inverted);
    const uint64_t start = p * bits;
    for (size_t i = 0; i < bits && start + i < out.size(); ++i) {
      if (page.test(i)) out.set(start + i);
    }
  }
  return out;
}

// ---------------------------------------------------------------- compiler

namespace {

struct Group {
  uint32_t block;
  uint64_t pbm;
};

struct Sensing {
  bool inverse = false;
  std::vector<Group> groups;
};

using Chain = std::vector<Sensing>;  // AND in the sensing latch

// OR of chains in the cache latch, optionally XORed with one more chain.
struct Form {
  std::vector<Chain> cover;
  std::optional<Chain> xor_chain;
};

class Compiler {
 public:
  Compiler(const Placement& placement, const CompileOptions& options)
      : placement_(placement),
        opts_(options),
        max_blocks_(options.multi_wordline
                        ? std::clamp<uint32_t>(options.max_blocks_per_frame, 1, kMaxAddressGroups)
                        : 1) {}

  Plan run(const Node& root) {
    plan_.system = opts_.multi_wordline ? SystemModel::FC : SystemModel::PB;
    plan_.result = emit_node(root);
    return std::move(plan_);
  }

 private:
  // A literal reads back directly when its polarity matches the stored cell.
  bool cell_positive(const Node& lit) const {
    return lit.neg == location(lit.var).stored_inverted;
  }
  const VarLocation& location(const std::string& v) const {
    auto it = placement_.vars.find(v);
    if (it == placement_.vars.end()) throw std::out_of_range("variable " + v + " is not placed");
    return it->second;
  }
  Group lit_group(const Node& lit) const {
    const auto& loc = location(lit.var);
    return {loc.block, uint64_t{1} << loc.wordline};
  }

  // AND of same-polarity literals in one block (positive), or OR of
  // cell-negative literals in one block (negative).
  std::optional<Group> block_group(const Node& n, bool positive) const {
    if (n.kind == Node::Lit) {
      if (cell_positive(n) != positive) return std::nullopt;
      return lit_group(n);
    }
    if (!opts_.multi_wordline) return std::nullopt;
    if (n.kind != (positive ? Node::And : Node::Or)) return std::nullopt;
    std::optional<Group> g;
    for (const auto& k : n.kids) {
      if (k.kind != Node::Lit || cell_positive(k) != positive) return std::nullopt;
      const Group kg = lit_group(k);
      if (g && g->block != kg.block) return std::nullopt;
      if (!g) g = kg;
      g->pbm |= kg.pbm;
    }
    return g;
  }

  std::optional<Sensing> multi_block(const std::vector<Node>& kids, bool positive) const {
    Sensing s{!positive, {}};
    for (const auto& k : kids) {
      auto g = block_group(k, positive);
      if (!g) return std::nullopt;
      for (const auto& other : s.groups) {
        if (other.block == g->block) return std::nullopt;
      }
      s.groups.push_back(*g);
    }
    if (s.groups.size() > max_blocks_) return std::nullopt;
    return s;
  }

  std::optional<Sensing> sensing(const Node& n) const {
    if (auto g = block_group(n, true)) return Sensing{false, {*g}};
    if (auto g = block_group(n, false)) return Sensing{true, {*g}};
    if (n.kind == Node::Or) return multi_block(n.kids, true);
    if (n.kind == Node::And) return multi_block(n.kids, false);
    return std::nullopt;
  }

  std::optional<Chain> chain(const Node& n) const {
    if (auto s = sensing(n)) return Chain{*s};
    if (n.kind != Node::And) return std::nullopt;
    std::vector<Group> pos;  // merged per block
    std::vector<Sensing> multi;
    std::vector<Group> neg;
    for (const auto& k : n.kids) {
      if (auto g = block_group(k, true)) {
        auto it = std::find_if(pos.begin(), pos.end(), [&](const Group& x) { return x.block == g->block; });
        if (opts_.multi_wordline && it != pos.end()) {
          it->pbm |= g->pbm;
        } else {
          pos.push_back(*g);
        }
        continue;
      }
      auto s = sensing(k);
      if (!s) return std::nullopt;
      if (s->inverse) {
        neg.insert(neg.end(), s->groups.begin(), s->groups.end());
      } else {
        multi.push_back(*s);
      }
    }
    Chain c;
    if (!neg.empty()) {
      std::set<uint32_t> blocks;
      for (const auto& g : neg) {
        if (!blocks.insert(g.block).second) return std::nullopt;
      }
      if (neg.size() > max_blocks_) return std::nullopt;
      c.push_back({true, neg});
    }
    for (const auto& g : pos) c.push_back({false, {g}});
    for (auto& s : multi) c.push_back(std::move(s));
    return c;
  }

  std::optional<std::vector<Chain>> cover(const Node& n) const {
    if (n.kind != Node::Or) {
      auto c = chain(n);
      if (!c) return std::nullopt;
      return std::vector<Chain>{*c};
    }
    if (auto s = sensing(n)) return std::vector<Chain>{{*s}};
    std::vector<Sensing> bins;  // positive block groups packed into inter-block sensings
    std::vector<Group> neg;     // cell-negative literals merged per block
    std::vector<Chain> rest;
    for (const auto& k : n.kids) {
      if (auto g = block_group(k, true)) {
        bool placed = false;
        for (auto& b : bins) {
          if (b.groups.size() >= max_blocks_) continue;
          if (std::any_of(b.groups.begin(), b.groups.end(), [&](const Group& x) { return x.block == g->block; })) continue;
          b.groups.push_back(*g);
          placed = true;
          break;
        }
        if (!placed) bins.push_back({false, {*g}});
        continue;
      }
      if (auto g = block_group(k, false)) {
        auto it = std::find_if(neg.begin(), neg.end(), [&](const Group& x) { return x.block == g->block; });
        if (opts_.multi_wordline && it != neg.end()) {
          it->pbm |= g->pbm;
        } else {
          neg.push_back(*g);
        }
        continue;
      }
      auto c = chain(k);
      if (!c) return std::nullopt;
      rest.push_back(std::move(*c));
    }
    std::vector<Chain> out;
    for (auto& b : bins) out.push_back({std::move(b)});
    for (auto& g : neg) out.push_back({Sensing{true, {g}}});
    for (auto& c : rest) out.push_back(std::move(c));
    return out;
  }

  std::optional<Form> fit(const Node& n) const {
    if (auto c = cover(n)) return Form{std::move(*c), std::nullopt};
    if (n.kind == Node::Xor) {
      for (int i = 0; i < 2; ++i) {
        auto c = cover(n.kids[i]);
        auto x = c ? chain(n.kids[1 - i]) : std::nullopt;
        if (c && x) return Form{std::move(*c), std::move(*x)};
      }
    }
    return std::nullopt;
  }

  void emit_frame(const Sensing& s, bool init_s, bool init_c, bool move) {
    MwsFrame f;
    f.flags = {s.inverse, init_s, init_c, move};
    for (const auto& g : s.groups) f.groups.push_back({g.block, g.pbm});
    plan_.steps.push_back(FrameStep{std::move(f)});
  }

  void emit_chain(const Chain& c, bool first_of_segment, bool move) {
    for (size_t j = 0; j < c.size(); ++j) {
      emit_frame(c[j], j == 0, first_of_segment && j == 0, move && j + 1 == c.size());
    }
    size_t positive = std::count_if(c.begin(), c.end(), [](const Sensing& s) { return !s.inverse; });
    if (c.size() > 1) {
      plan_.notes.push_back(fmt::format("accumulation chain of {} sensings ({} inverse)", c.size(),
                                        c.size() - positive));
    }
  }

  uint32_t emit_form(const Form& f) {
    for (size_t i = 0; i < f.cover.size(); ++i) emit_chain(f.cover[i], i == 0, true);
    if (f.xor_chain) {
      emit_chain(*f.xor_chain, false, false);
      plan_.steps.push_back(FrameStep{XorFrame{0}});
    }
    const uint32_t t = plan_.temps++;
    plan_.steps.push_back(ReadoutStep{t});
    return t;
  }

  uint32_t host(HostOp op, std::vector<uint32_t> inputs) {
    if (!opts_.host_fallback) {
      throw UnsupportedShape("expression exceeds in-latch expressiveness and host fallback is off");
    }
    plan_.host_fallback = true;
    const uint32_t t = plan_.temps++;
    plan_.steps.push_back(HostStep{op, std::move(inputs), t});
    return t;
  }

  uint32_t emit_node(const Node& n) {
    if (auto f = fit(n)) return emit_form(*f);
    if (!opts_.host_fallback) {
      throw UnsupportedShape("expression exceeds in-latch expressiveness and host fallback is off");
    }
    std::vector<uint32_t> temps;
    if (n.kind == Node::Xor) {
      temps.push_back(emit_node(n.kids[0]));
      temps.push_back(emit_node(n.kids[1]));
      plan_.notes.push_back("host combine: xor");
      return host(HostOp::Xor, std::move(temps));
    }
    const bool is_and = n.kind == Node::And;
    Node part;
    part.kind = n.kind;
    std::vector<const Node*> rest;
    for (const auto& k : n.kids) {
      Node trial = part;
      trial.kids.push_back(k);
      const bool ok = is_and ? chain(trial).has_value() : chain(k).has_value();
      if (ok) {
        part = std::move(trial);
      } else {
        rest.push_back(&k);
      }
    }
    if (part.kids.size() == 1) {
      temps.push_back(emit_node(part.kids[0]));
    } else if (!part.kids.empty()) {
      temps.push_back(emit_node(part));
    }
    for (const Node* k : rest) temps.push_back(emit_node(*k));
    plan_.notes.push_back(fmt::format("host combine: {} of {} partial results", is_and ? "and" : "or",
                                      temps.size()));
    return host(is_and ? HostOp::And : HostOp::Or, std::move(temps));
  }

  const Placement& placement_;
  CompileOptions opts_;
  uint32_t max_blocks_;
  Plan plan_;
};

}  // namespace

Plan compile(const Expr& e, const Placement& placement, const CompileOptions& options) {
  validate(e);
  return Compiler(placement, options).run(nnf(e, false));
}

PlanStats plan_stats(const Plan& plan, const ChipGeometry& geometry) {
  PlanStats s;
  std::set<uint32_t> touched;
  for (const auto& step : plan.steps) {
    if (const auto* f = std::get_if<FrameStep>(&step)) {
      ++s.frames;
      if (const auto* m = std::get_if<MwsFrame>(&f->frame)) {
        ++s.sensings;
        if (m->flags.init_s) ++s.chains;
        ++s.blocks_per_frame[static_cast<uint32_t>(m->groups.size())];
        for (const auto& g : m->groups) {
          touched.insert(g.block % geometry.blocks_per_plane);
          s.max_wordlines = std::max<uint32_t>(s.max_wordlines, std::popcount(g.pbm));
        }
      } else if (std::holds_alternative<XorFrame>(f->frame)) {
        ++s.xor_frames;
      }
    } else if (std::holds_alternative<ReadoutStep>(step)) {
      ++s.readouts;
    } else {
      ++s.host_ops;
    }
  }
  s.blocks_touched.assign(touched.begin(), touched.end());
  return s;
}

std::vector<SensingGroup> sensing_profile(const Plan& plan, const ChipGeometry&) {
  std::map<std::pair<uint32_t, uint32_t>, uint64_t> shapes;
  for (const auto& step : plan.steps) {
    const auto* f = std::get_if<FrameStep>(&step);
    if (!f) continue;
    const auto* m = std::get_if<MwsFrame>(&f->frame);
    if (!m) continue;
    uint32_t wl = 0;
    for (const auto& g : m->groups) wl = std::max<uint32_t>(wl, std::popcount(g.pbm));
    ++shapes[{static_cast<uint32_t>(m->groups.size()), wl}];
  }
  std::vector<SensingGroup> out;
  for (const auto& [shape, count] : shapes) out.push_back({count, shape.first, shape.second});
  return out;
}

BitVector execute(const Plan& plan, FlashArray& array, const Placement& placement) {
  check_geometry(array, placement);
  const auto& g = placement.geometry;
  const size_t bits = g.bitlines_per_block();
  BitVector out(placement.vector_bits);
  std::vector<BitVector> temps(plan.temps);
  for (uint64_t p = 0; p < placement.pages(); ++p) {
    const auto s = slot(array, p);
    ChipState& chip = array.chip(s.unit);
    for (const auto& step : plan.steps) {
      if (const auto* f = std::get_if<FrameStep>(&step)) {
        if (const auto* m = std::get_if<MwsFrame>(&f->frame)) {
          MwsTarget t = to_target(*m, g);
          t.plane = s.unit.plane;
          for (auto& b : t.blocks) b.block = placement.row_block(b.block, s.row);
          mws_execute(chip, t, m->flags);
        } else if (std::holds_alternative<XorFrame>(f->frame)) {
          xor_latches(chip, s.unit.plane);
        } else {
          throw InvalidTarget("plans may not program pages");
        }
      } else if (const auto* r = std::get_if<ReadoutStep>(&step)) {
        temps.at(r->temp) = read_cache(chip, s.unit.plane);
      } else {
        const auto& h = std::get<HostStep>(step);
        BitVector acc = temps.at(h.inputs.at(0));
        for (size_t i = 1; i < h.inputs.size(); ++i) {
          const auto& x = temps.at(h.inputs[i]);
          switch (h.op) {
            case HostOp::And: acc &= x; break;
            case HostOp::Or: acc |= x; break;
            case HostOp::Xor: acc ^= x; break;
          }
        }
        temps.at(h.output) = std::move(acc);
      }
    }
    const BitVector& page = temps.at(plan.result);
    const uint64_t start = p * bits;
    for (size_t i = 0; i < bits && start + i < out.size(); ++i) {
      if (page.test(i)) out.set(start + i);
    }
  }
  return out;
}

std::vector<uint8_t> encode_plan(const Plan& plan) {
  std::vector<uint8_t> out;
  for (const auto& step : plan.steps) {
    if (const auto* f = std::get_if<FrameStep>(&step)) encode_into(f->frame, out);
  }
  return out;
}

namespace {

const char* host_op_name(HostOp op) {
  switch (op) {
    case HostOp::And: return "and";
    case HostOp::Or: return "or";
    case HostOp::Xor: return "xor";
  }
  return "?";
}

}  // namespace

nlohmann::json plan_to_json(const Plan& plan, const Placement& placement) {
  using nlohmann::json;
  json steps = json::array();
  for (const auto& step : plan.steps) {
    if (const auto* f = std::get_if<FrameStep>(&step)) {
      json j{{"kind", "frame"}, {"hex", to_hex(encode(f->frame))}};
      if (const auto* m = std::get_if<MwsFrame>(&f->frame)) {
        j["op"] = "mws";
        j["flags"] = {{"inverse", m->flags.inverse}, {"init_s", m->flags.init_s},
                      {"init_c", m->flags.init_c}, {"move", m->flags.move_s_to_c}};
        json groups = json::array();
        for (const auto& g : m->groups) groups.push_back({{"block", g.block}, {"pbm", g.pbm}});
        j["groups"] = groups;
      } else {
        j["op"] = "xor";
      }
      steps.push_back(j);
    } else if (const auto* r = std::get_if<ReadoutStep>(&step)) {
      steps.push_back({{"kind", "readout"}, {"temp", r->temp}});
    } else {
      const auto& h = std::get<HostStep>(step);
      steps.push_back({{"kind", "host"}, {"op", host_op_name(h.op)}, {"inputs", h.inputs}, {"output", h.output}});
    }
  }
  const auto st = plan_stats(plan, placement.geometry);
  json hist = json::object();
  for (const auto& [k, v] : st.blocks_per_frame) hist[std::to_string(k)] = v;
  json vars = json::object();
  for (const auto& [name, loc] : placement.vars) {
    vars[name] = {{"block", loc.block}, {"wordline", loc.wordline},
                  {"stored_inverted", loc.stored_inverted}, {"mode", std::string(to_string(loc.mode))}};
  }
  return json{{"version", 1},
              {"system", std::string(to_string(plan.system))},
              {"steps", steps},
              {"temps", plan.temps},
              {"result", plan.result},
              {"host_fallback", plan.host_fallback},
              {"notes", plan.notes},
              {"stats", {{"sensings", st.sensings}, {"frames", st.frames}, {"xor_frames", st.xor_frames},
                         {"readouts", st.readouts}, {"host_ops", st.host_ops}, {"chains", st.chains},
                         {"blocks_per_frame", hist}, {"max_wordlines", st.max_wordlines},
                         {"blocks_touched", st.blocks_touched}}},
              {"placement", {{"template_blocks", placement.template_blocks},
                             {"vector_bits", placement.vector_bits}, {"vars", vars}}}};
}

std::string describe(const Plan& plan, const ChipGeometry& geometry) {
  std::string s;
  size_t i = 0;
  for (const auto& step : plan.steps) {
    s += fmt::format("{:3}  ", i++);
    if (const auto* f = std::get_if<FrameStep>(&step)) {
      if (const auto* m = std::get_if<MwsFrame>(&f->frame)) {
        s += fmt::format("MWS{}{}{}{}", m->flags.inverse ? " inverse" : "", m->flags.init_s ? " init_s" : "",
                         m->flags.init_c ? " init_c" : "", m->flags.move_s_to_c ? " move" : "");
        for (const auto& g : m->groups) {
          s += fmt::format(" [blk {} wl x{}]", g.block % geometry.blocks_per_plane, std::popcount(g.pbm));
        }
      } else {
        s += "XOR S^C";
      }
    } else if (const auto* r = std::get_if<ReadoutStep>(&step)) {
      s += fmt::format("READOUT -> t{}", r->temp);
    } else {
      const auto& h = std::get<HostStep>(step);
      s += fmt::format("HOST {} ->t{} <-", host_op_name(h.op), h.output);
      for (auto t : h.inputs) s += fmt::format(" t{}", t);
    }
    s += '\n';
  }
  s += fmt::format("result: t{}{}\n", plan.result, plan.host_fallback ? " (host fallback)" : "");
  for (const auto& n : plan.notes) s += "note: " + n + '\n';
  return s;
}

}  // namespace flashbit
