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

#include "flashbit/workloads.hpp"

#include <algorithm>
#include <random>

#include <fmt/format.h>

#include "flashbit/error.hpp"

namespace flashbit {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Expr and_of(const std::vector<std::string>& names) {
  if (names.size() == 1) return Expr::var(names[0]);
  std::vector<Expr> a;
  for (const auto& n : names) a.push_back(Expr::var(n));
  return Expr::and_(std::move(a));
}

std::vector<std::string> bmi_vars(uint32_t days) {
  std::vector<std::string> v;
  for (uint32_t i = 0; i < days; ++i) v.push_back(fmt::format("day{}", i));
  return v;
}

std::string kcs_vertex(uint32_t clique, uint32_t j) { return fmt::format("c{}_v{}", clique, j); }
std::string kcs_members(uint32_t clique) { return fmt::format("c{}_members", clique); }

Expr kcs_query(uint32_t clique, uint32_t k) {
  std::vector<std::string> vs;
  for (uint32_t j = 0; j < k; ++j) vs.push_back(kcs_vertex(clique, j));
  return Expr::or_({and_of(vs), Expr::var(kcs_members(clique))});
}

const Expr kIms = Expr::and_({Expr::var("Y"), Expr::var("U"), Expr::var("V")});

// Undirected edge presence as a pure function of the endpoints.
bool edge(uint64_t seed, uint64_t a, uint64_t b, double p) {
  if (a == b) return false;
  if (a > b) std::swap(a, b);
  return static_cast<double>(mix_seed(seed, a, b) >> 11) * 0x1.0p-53 < p;
}

}  // namespace

std::string workload_name(const WorkloadSpec& spec) {
  return std::visit(overloaded{[](const BmiSpec&) { return std::string("BMI"); },
                               [](const ImsSpec&) { return std::string("IMS"); },
                               [](const KcsSpec&) { return std::string("KCS"); }},
                    spec);
}

std::string workload_param(const WorkloadSpec& spec) {
  return std::visit(overloaded{[](const BmiSpec& s) { return fmt::format("m={}", s.months); },
                               [](const ImsSpec& s) { return fmt::format("I={}", s.images); },
                               [](const KcsSpec& s) { return fmt::format("k={}", s.k); }},
                    spec);
}

uint32_t bmi_days(uint32_t months) { return static_cast<uint32_t>(365ull * months / 12); }

uint64_t vector_bits(const WorkloadSpec& spec) {
  return std::visit(
      overloaded{[](const BmiSpec& s) { return s.users; },
                 [](const ImsSpec& s) { return s.images * s.width * s.height * s.colors; },
                 [](const KcsSpec& s) { return s.vertices; }},
      spec);
}

GeneratedWorkload generate(const WorkloadSpec& spec, uint64_t seed) {
  GeneratedWorkload w;
  if (const auto* b = std::get_if<BmiSpec>(&spec)) {
    const uint32_t d = bmi_days(b->months);
    if (d == 0) throw ConfigError("BMI needs at least one day");
    const auto names = bmi_vars(d);
    for (uint32_t i = 0; i < d; ++i) {
      w.vectors[names[i]] = random_bits(b->users, mix_seed(seed, i), b->activity);
    }
    // Users active on every day, checked user by user.
    BitVector all(b->users);
    for (uint64_t u = 0; u < b->users; ++u) {
      bool active = true;
      for (const auto& n : names) active = active && w.vectors[n].test(u);
      if (active) all.set(u);
    }
    w.queries.push_back(and_of(names));
    w.expected_count = all.count();
    w.expected.push_back(std::move(all));
  } else if (const auto* im = std::get_if<ImsSpec>(&spec)) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> byte(0, 255);
    std::vector<ColorClass> classes = im->classes;
    while (classes.size() < im->colors) {
      ColorClass c;
      auto range = [&](uint8_t& lo, uint8_t& hi) {
        const int a = byte(rng), len = std::uniform_int_distribution<int>(32, 160)(rng);
        lo = static_cast<uint8_t>(a);
        hi = static_cast<uint8_t>(std::min(255, a + len));
      };
      range(c.y_lo, c.y_hi);
      range(c.u_lo, c.u_hi);
      range(c.v_lo, c.v_hi);
      classes.push_back(c);
    }
    const uint64_t pixels = im->images * im->width * im->height;
    const uint64_t bits = pixels * im->colors;
    BitVector y(bits), u(bits), v(bits), expect(bits);
    for (uint64_t p = 0; p < pixels; ++p) {
      const int py = byte(rng), pu = byte(rng), pv = byte(rng);
      for (uint32_t c = 0; c < im->colors; ++c) {
        const auto& k = classes[c];
        const uint64_t i = p * im->colors + c;
        const bool iy = py >= k.y_lo && py <= k.y_hi;
        const bool iu = pu >= k.u_lo && pu <= k.u_hi;
        const bool iv = pv >= k.v_lo && pv <= k.v_hi;
        y[i] = iy;
        u[i] = iu;
        v[i] = iv;
        expect[i] = iy && iu && iv;
      }
    }
    w.vectors = {{"Y", std::move(y)}, {"U", std::move(u)}, {"V", std::move(v)}};
    w.queries.push_back(kIms);
    w.expected.push_back(std::move(expect));
  } else {
    const auto& k = std::get<KcsSpec>(spec);
    if (k.k < 1 || k.k > k.vertices) throw ConfigError("KCS clique size out of range");
    std::mt19937_64 rng(seed);
    std::vector<uint64_t> all(k.vertices);
    for (uint64_t i = 0; i < k.vertices; ++i) all[i] = i;
    for (uint32_t c = 0; c < k.cliques; ++c) {
      std::vector<uint64_t> members;
      std::sample(all.begin(), all.end(), std::back_inserter(members), k.k, rng);
      auto adjacent = [&](uint64_t a, uint64_t b) {
        // Planted clique edges on top of the random graph.
        const bool both = std::binary_search(members.begin(), members.end(), a) &&
                          std::binary_search(members.begin(), members.end(), b);
        return a != b && (both || edge(seed, a, b, k.edge_probability));
      };
      BitVector member_bits(k.vertices);
      for (auto m : members) member_bits.set(m);
      std::vector<std::vector<uint64_t>> nbrs(members.size());
      for (uint32_t j = 0; j < members.size(); ++j) {
        BitVector adj(k.vertices);
        for (uint64_t x = 0; x < k.vertices; ++x) {
          if (adjacent(members[j], x)) {
            adj.set(x);
            nbrs[j].push_back(x);
          }
        }
        w.vectors[kcs_vertex(c, j)] = std::move(adj);
      }
      w.vectors[kcs_members(c)] = member_bits;
      // Star = clique plus the common neighbourhood, by sorted-list intersection.
      std::vector<uint64_t> common = nbrs[0];
      for (size_t j = 1; j < nbrs.size(); ++j) {
        std::vector<uint64_t> next;
        std::set_intersection(common.begin(), common.end(), nbrs[j].begin(), nbrs[j].end(),
                              std::back_inserter(next));
        common = std::move(next);
      }
      BitVector star = member_bits;
      for (auto x : common) star.set(x);
      w.queries.push_back(kcs_query(c, k.k));
      w.expected.push_back(std::move(star));
    }
  }
  return w;
}

std::vector<QueryProfile> profile(const WorkloadSpec& spec, const ChipGeometry& geometry,
                                  uint32_t max_blocks_per_frame) {
  Expr q;
  uint64_t repeat = 1;
  if (const auto* b = std::get_if<BmiSpec>(&spec)) {
    q = and_of(bmi_vars(bmi_days(b->months)));
  } else if (std::holds_alternative<ImsSpec>(spec)) {
    q = kIms;
  } else {
    const auto& k = std::get<KcsSpec>(spec);
    q = kcs_query(0, k.k);
    repeat = k.cliques;
  }
  const uint64_t bits = vector_bits(spec);
  // Plan shapes are identical on every stripe row, so compile against one row
  // and scale the volume analytically.
  const uint64_t one_row = uint64_t{geometry.planes_total()} * geometry.bitlines_per_block();
  const auto vars = variables(q);
  const auto placement = place(vars, derive_hints(q), geometry, std::min(bits, one_row));
  CompileOptions fc;
  fc.max_blocks_per_frame = max_blocks_per_frame;
  CompileOptions pb;
  pb.multi_wordline = false;
  const Plan fc_plan = compile(q, placement, fc);
  const Plan pb_plan = compile(q, placement, pb);

  QueryProfile p;
  p.name = workload_name(spec);
  p.vector_bits = bits;
  p.operands = static_cast<uint32_t>(vars.size());
  p.fc_sensings = sensing_profile(fc_plan, geometry);
  p.pb_sensings = sensing_profile(pb_plan, geometry);
  p.fc_readouts = static_cast<uint32_t>(plan_stats(fc_plan, geometry).readouts);
  p.pb_readouts = static_cast<uint32_t>(plan_stats(pb_plan, geometry).readouts);
  p.repeat = repeat;
  return {p};
}

RunResult run(const WorkloadSpec& spec, SystemModel system, const RunOptions& options) {
  RunResult r;
  r.workload = workload_name(spec);
  r.param = workload_param(spec);
  r.system = system;
  const auto prof = profile(spec, options.geometry);
  r.timeline = simulate_timeline(prof, system, options.geometry, options.timing, options.power);
  if (!options.functional) return r;

  const auto w = generate(spec, options.seed);
  std::vector<BitVector> got;
  if (system == SystemModel::OSP || system == SystemModel::ISP) {
    // Operands cross the channel through the controller's ECC, so the host
    // or accelerator combines corrected data.
    for (const auto& q : w.queries) got.push_back(eval(q, w.vectors));
  } else {
    const bool pb = system == SystemModel::PB;
    std::vector<std::string> names;
    for (const auto& [n, v] : w.vectors) names.push_back(n);
    PlacementOptions po;
    po.mode = pb ? options.pb_mode : options.fc_mode;
    const auto placement =
        place(names, derive_hints(w.queries), options.geometry, w.expected.at(0).size(), po);
    FlashArray array(options.geometry, options.seed, options.rber);
    store(array, placement, w.vectors);
    CompileOptions co;
    co.multi_wordline = !pb;
    for (const auto& q : w.queries) got.push_back(execute(compile(q, placement, co), array, placement));
  }
  r.checked = true;
  for (size_t i = 0; i < got.size(); ++i) r.bit_errors += hamming(got[i], w.expected[i]);
  r.correct = r.bit_errors == 0;
  if (w.expected_count) r.count = got.at(0).count();
  const bool exact = system == SystemModel::OSP || system == SystemModel::ISP ||
                     (system == SystemModel::FC && options.fc_mode == ProgramMode::ESP &&
                      rber(options.rber, ProgramMode::ESP, false, 0, 0) == 0.0);
  if (exact && !r.correct) {
    throw OracleMismatch(fmt::format("{} {} on {}: {} bit errors against the oracle", r.workload,
                                     r.param, to_string(system), r.bit_errors));
  }
  return r;
}

}  // namespace flashbit
