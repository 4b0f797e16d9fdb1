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

// Acceptance gate. One PASS/FAIL line per criterion; exit status is nonzero
// if any criterion fails. Tolerances are fixed below.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "flashbit/commands.hpp"
#include "flashbit/config.hpp"
#include "flashbit/error.hpp"
#include "flashbit/fuzz.hpp"
#include "flashbit/planner.hpp"
#include "flashbit/reliability.hpp"
#include "flashbit/timing.hpp"
#include "flashbit/workloads.hpp"
#include "oracles.hpp"

using namespace flashbit;

namespace {

constexpr double kTransferTol = 0.05;       // relative
constexpr double kTmwsTol = 0.01;           // relative
constexpr double kEnergyTarget = 0.47, kEnergyTol = 0.02;
constexpr double kFcOspLo = 16, kFcOspHi = 64;
constexpr double kFcPbLo = 2, kFcPbHi = 6;
constexpr double kBmi36Lo = 120, kBmi36Hi = 280;
constexpr double kLinearTol = 1e-9;         // relative, PB latency vs k
constexpr double kInjectTol = 0.05;         // relative
constexpr double kMultiplierTol = 1e-12;    // relative
constexpr double kRuntimeLimitS = 300;

struct Outcome {
  bool pass = true;
  std::string detail;
};

oracle::Bits bools(const BitVector& v) {
  oracle::Bits b(v.size());
  for (size_t i = 0; i < v.size(); ++i) b[i] = v.test(i);
  return b;
}

bool within(double got, double want, double rel) { return std::abs(got - want) <= rel * std::abs(want); }

Outcome c1_oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  uint64_t mismatches = 0, max_vars = 0, max_depth = 0;
  const uint64_t cases = 10'000;
  for (uint64_t i = 0; i < cases; ++i) {
    const uint32_t bits = 8 * (1 + i % 8);
    const auto c = run_fuzz_case(mix_seed(0xACCE, i), bits);
    std::map<std::string, oracle::Bits> v;
    for (const auto& [k, x] : c.vectors) v[k] = bools(x);
    if (bools(c.result) != oracle::eval(c.expr, v, bits)) ++mismatches;
    max_vars = std::max<uint64_t>(max_vars, variables(c.expr).size());
    max_depth = std::max<uint64_t>(max_depth, depth(c.expr));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {mismatches == 0 && max_vars <= 64 && max_depth <= 3 && secs < kRuntimeLimitS,
          fmt::format("{} cases, {} mismatches, max vars {}, max depth {}, {:.1f} s", cases, mismatches,
                      max_vars, max_depth, secs)};
}

Outcome c2_four_groups() {
  const Expr e = parse_expr("(A1 | (B1 & B2 & B3 & B4)) & (C1 | C3) & (D2 | D4)");
  const auto g = ChipGeometry::toy(8, 16, 48);
  const auto pl = place(variables(e), derive_hints(e), g, 64);
  const bool inverted = pl.vars.at("C1").stored_inverted && pl.vars.at("C3").stored_inverted &&
                        pl.vars.at("D2").stored_inverted && pl.vars.at("D4").stored_inverted;
  const Plan plan = compile(e, pl);
  std::vector<MwsFrame> frames;
  for (const auto& s : plan.steps) {
    if (const auto* f = std::get_if<FrameStep>(&s)) frames.push_back(std::get<MwsFrame>(f->frame));
  }
  const bool order = frames.size() == 2 && frames[0].flags.inverse && !frames[1].flags.inverse &&
                     frames[1].flags.move_s_to_c;
  VectorMap v;
  std::map<std::string, oracle::Bits> ov;
  uint64_t s = 1;
  for (const auto& n : variables(e)) {
    v[n] = random_bits(64, s++, 0.7);
    ov[n] = bools(v[n]);
  }
  FlashArray a(g);
  store(a, pl, v);
  const bool correct = bools(execute(plan, a, pl)) == oracle::eval(e, ov, 64);
  std::string hex;
  for (const auto& f : frames) hex += (hex.empty() ? "" : " ") + to_hex(encode(f));
  return {inverted && order && correct,
          fmt::format("{} frames, inverse first: {}, result correct: {}, frames {}", frames.size(), order,
                      correct, hex)};
}

Outcome c3_transfers() {
  const double dma = transfer_us(32 * 1024, 1.2e9), ext = transfer_us(32 * 1024, 8e9);
  return {within(dma, 27, kTransferTol) && within(ext, 4, kTransferTol),
          fmt::format("DMA {:.2f} us (27 +-5%), external {:.2f} us (4 +-5%)", dma, ext)};
}

Outcome c4_tmws() {
  bool capped = true;
  for (uint32_t w = 1; w <= 48; ++w) {
    for (uint32_t b = 1; b <= 4; ++b) capped = capped && tmws(w, b) == 25.0;
  }
  const double inter = tmws(1, 32), intra = tmws_raw(48, 1);
  return {capped && within(inter, 1.363 * 22.5, kTmwsTol) && within(intra, 1.033 * 22.5, kTmwsTol),
          fmt::format("<=4 blocks all 25 us: {}, 32-block {:.3f} us, 48-WL raw {:.3f} us", capped, inter, intra)};
}

Outcome c5_energy() {
  const double r = inter_mws_energy_ratio(4);
  return {std::abs(r - kEnergyTarget) <= kEnergyTol, fmt::format("4-block MWS / 4 reads = {:.4f}", r)};
}

Outcome c6_sensing_law() {
  uint32_t bad = 0;
  for (uint32_t n = 1; n <= 200; ++n) {
    std::vector<Expr> a;
    for (uint32_t i = 0; i < n; ++i) a.push_back(Expr::var(fmt::format("x{}", i)));
    const Expr e = n == 1 ? a[0] : Expr::and_(a);
    const auto g = ChipGeometry::toy(8, 16, 48);
    const auto pl = place(variables(e), derive_hints(e), g, 64);
    if (plan_stats(compile(e, pl), g).sensings != (n + 47) / 48) ++bad;
  }
  const auto p = profile(BmiSpec{800'000'000, 36, 0.5}, ChipGeometry::standard()).at(0);
  uint64_t fc = 0, pb = 0;
  for (const auto& s : p.fc_sensings) fc += s.count;
  for (const auto& s : p.pb_sensings) pb += s.count;
  return {bad == 0 && fc == 23 && pb == 1095,
          fmt::format("n=1..200 mismatches {}, BMI m=36 FC {} vs PB {} sensings", bad, fc, pb)};
}

double geomean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += std::log(x);
  return std::exp(s / v.size());
}

Outcome c7_trends() {
  RunOptions o;
  std::map<std::string, std::vector<double>> fc_osp, fc_pb;
  std::vector<double> bmi_fc_pb;
  std::vector<std::pair<double, double>> kcs_pb;
  double bmi36 = 0;
  for (const auto& spec : default_sweep()) {
    const double osp = run(spec, SystemModel::OSP, o).timeline.latency_us;
    const double pb = run(spec, SystemModel::PB, o).timeline.latency_us;
    const double fc = run(spec, SystemModel::FC, o).timeline.latency_us;
    const auto name = workload_name(spec);
    fc_osp[name].push_back(osp / fc);
    fc_pb[name].push_back(pb / fc);
    if (const auto* b = std::get_if<BmiSpec>(&spec)) {
      bmi_fc_pb.push_back(pb / fc);
      if (b->months == 36) bmi36 = osp / fc;
    }
    if (const auto* k = std::get_if<KcsSpec>(&spec)) kcs_pb.push_back({k->k, pb});
  }
  std::vector<double> wo, wp;
  std::string per;
  for (const auto& [n, v] : fc_osp) {
    wo.push_back(geomean(v));
    wp.push_back(geomean(fc_pb[n]));
    per += fmt::format(" {} {:.1f}x/{:.2f}x", n, wo.back(), wp.back());
  }
  const double m_osp = geomean(wo), m_pb = geomean(wp);
  bool monotone = true;
  for (size_t i = 1; i < bmi_fc_pb.size(); ++i) monotone = monotone && bmi_fc_pb[i] > bmi_fc_pb[i - 1];
  // Linearity over the k >= 16 points, which are sensing-bound.
  std::vector<std::pair<double, double>> lin;
  for (const auto& p : kcs_pb) {
    if (p.first >= 16) lin.push_back(p);
  }
  bool linear = lin.size() >= 3;
  if (linear) {
    const double slope = (lin[1].second - lin[0].second) / (lin[1].first - lin[0].first);
    for (size_t i = 2; i < lin.size(); ++i) {
      const double want = lin[0].second + slope * (lin[i].first - lin[0].first);
      linear = linear && within(lin[i].second, want, kLinearTol);
    }
  }
  const bool ok_osp = m_osp >= kFcOspLo && m_osp <= kFcOspHi;
  const bool ok_pb = m_pb >= kFcPbLo && m_pb <= kFcPbHi;
  const bool ok_36 = bmi36 >= kBmi36Lo && bmi36 <= kBmi36Hi;
  return {ok_osp && ok_pb && ok_36 && monotone && linear,
          fmt::format("FC/OSP {:.1f}x [{},{}] {}; FC/PB {:.2f}x [{},{}] {}; BMI m=36 FC/OSP {:.1f}x [{},{}] {}; "
                      "FC/PB rising in m {}; PB linear in k {};{}",
                      m_osp, kFcOspLo, kFcOspHi, ok_osp ? "ok" : "OUT", m_pb, kFcPbLo, kFcPbHi,
                      ok_pb ? "ok" : "OUT", bmi36, kBmi36Lo, kBmi36Hi, ok_36 ? "ok" : "OUT", monotone, linear,
                      per)};
}

Outcome c8_reliability() {
  const size_t n = 10'000'000;
  const double rate = 1e-3;
  const double got = inject(zeros(n), rate, 0x5EED).count() / static_cast<double>(n);
  const bool inj = within(got, rate, kInjectTol);

  // ESP pages at and above the zero-error ratio, sensed until >= 1e9 bits.
  ChipGeometry g = ChipGeometry::toy(16 * 1024, 4, 4);
  ChipState chip(g, 99);
  const std::vector<double> ratios{1.9, 2.0, 2.5, 3.0};
  for (uint32_t b = 0; b < 4; ++b) {
    for (uint32_t w = 0; w < 4; ++w) {
      chip.program_page({0, b, w}, random_bits(g.bitlines_per_block(), b * 4 + w), ProgramMode::ESP, false,
                        std::nullopt, ratios[w]);
    }
    chip.set_wear(0, b, 10000 * b, 365.0 * b);
  }
  uint64_t bits = 0, flips = 0, id = 0;
  while (bits < 1'000'000'000ull) {
    for (uint32_t b = 0; b < 4; ++b) {
      for (uint32_t w = 0; w < 4; ++w) {
        const PageAddress a{0, b, w};
        flips += hamming(chip.sense_page(a, id++), chip.page(a).data);
        bits += g.bitlines_per_block();
      }
    }
  }
  const RberModel m;
  double worst = 0;
  for (uint64_t pec : {0ull, 5000ull, 10000ull, 30000ull}) {
    for (double d : {0.0, 365.0, 3650.0}) {
      worst = std::max(worst, std::abs(rber(m, ProgramMode::SLC, false, pec, d) /
                                           rber(m, ProgramMode::SLC, true, pec, d) / 1.91 - 1));
      worst = std::max(worst, std::abs(rber(m, ProgramMode::MLC, false, pec, d) /
                                           rber(m, ProgramMode::MLC, true, pec, d) / 4.92 - 1));
    }
  }
  const bool mult = worst <= kMultiplierTol;
  return {inj && flips == 0 && mult,
          fmt::format("injected {:.4e} at 1e-3 over 1e7 bits; ESP >=1.9: {} flips in {} bits; "
                      "multiplier rel. error {:.1e}",
                      got, flips, bits, worst)};
}

Outcome c9_codec() {
  std::mt19937_64 rng(0xC0DEC);
  uint64_t lossy = 0;
  const uint64_t n = 100'000;
  for (uint64_t i = 0; i < n; ++i) {
    CommandFrame f;
    switch (rng() % 3) {
      case 0: {
        MwsFrame m;
        m.flags = MwsFlags::from_iscm(rng() % 16);
        const int k = 1 + rng() % 4;
        for (int j = 0; j < k; ++j) m.groups.push_back({uint32_t(rng() & kMaxBlockAddress), 1 + rng() % ((1ull << 48) - 1)});
        f = m;
        break;
      }
      case 1: {
        EspFrame e{uint32_t(rng() & kMaxBlockAddress), uint8_t(rng() % 64), std::vector<uint8_t>(1 + rng() % 32)};
        for (auto& b : e.payload) b = static_cast<uint8_t>(rng());
        f = e;
        break;
      }
      default: f = XorFrame{uint8_t(rng())}; break;
    }
    if (decode(encode(f)) != f) ++lossy;
  }
  bool rejected_enc = false, rejected_dec = false;
  MwsFrame five{{false, true, true, true}, {{0, 1}, {1, 1}, {2, 1}, {3, 1}, {4, 1}}};
  try {
    encode(five);
  } catch (const MalformedFrame&) {
    rejected_enc = true;
  }
  try {
    decode(oracle::mws_bytes(false, true, true, true, {{0, 1}, {1, 1}, {2, 1}, {3, 1}, {4, 1}}));
  } catch (const MalformedFrame&) {
    rejected_dec = true;
  }
  return {lossy == 0 && rejected_enc && rejected_dec,
          fmt::format("{} round trips, {} lossy; 5-group frame rejected on encode {} / decode {}", n, lossy,
                      rejected_enc, rejected_dec)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"oracle equivalence", c1_oracle_equivalence},
      {"two-frame example", c2_four_groups},
      {"transfer times", c3_transfers},
      {"tMWS", c4_tmws},
      {"inter-block MWS energy", c5_energy},
      {"sensing-count law", c6_sensing_law},
      {"end-to-end trends", c7_trends},
      {"reliability statistics", c8_reliability},
      {"command codec", c9_codec},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << fmt::format("[{}] {}: {}: {}", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail)
              << std::endl;
  }
  std::cout << fmt::format("{}/{} criteria passed", criteria.size() - failed, criteria.size()) << std::endl;
  return failed ? 1 : 0;
}
