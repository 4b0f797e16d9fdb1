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

#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "flashbit/error.hpp"
#include "flashbit/timing.hpp"
#include "oracles.hpp"

using namespace flashbit;

TEST(Transfer, QuotedDmaAndExternal) {
  EXPECT_NEAR(transfer_us(32 * 1024, 1.2e9), 27.0, 27.0 * 0.05);
  EXPECT_NEAR(transfer_us(32 * 1024, 8.0e9), 4.0, 4.0 * 0.05);
  EXPECT_DOUBLE_EQ(transfer_us(0, 1e9), 0.0);
}

TEST(Tmws, CappedUpToFourBlocks) {
  for (uint32_t w = 1; w <= 48; ++w) {
    for (uint32_t b = 1; b <= 4; ++b) EXPECT_EQ(tmws(w, b), 25.0);
  }
}

TEST(Tmws, RawCurvesMatchAnchors) {
  EXPECT_NEAR(tmws_raw(1, 32), 1.363 * 22.5, 1.363 * 22.5 * 0.01);
  EXPECT_NEAR(tmws_raw(48, 1), 1.033 * 22.5, 1.033 * 22.5 * 0.01);
  EXPECT_DOUBLE_EQ(tmws_raw(1, 1), 22.5);
  EXPECT_NEAR(tmws(1, 32), 1.363 * 22.5, 1e-9);
  EXPECT_EQ(tmws(1, 5), 25.0);  // raw below the cap stays at the cap
}

TEST(Tmws, InterpolationAgainstReference) {
  const std::vector<std::pair<double, double>> inter{{1, 1.0}, {4, 1.033}, {8, 1.05}, {16, 1.15}, {32, 1.363}};
  const std::vector<std::pair<double, double>> intra{{1, 1.0}, {8, 1.01}, {48, 1.033}};
  for (uint32_t b = 1; b <= 32; ++b) {
    for (uint32_t w : {1u, 5u, 8u, 20u, 48u}) {
      const double want = 22.5 * std::max(oracle::lerp_points(inter, b), oracle::lerp_points(intra, w));
      EXPECT_NEAR(tmws_raw(w, b), want, 1e-9) << w << "," << b;
    }
  }
}

TEST(Tmws, MonotoneAndRangeChecked) {
  for (uint32_t b = 2; b <= 32; ++b) EXPECT_GE(tmws_raw(1, b), tmws_raw(1, b - 1));
  for (uint32_t w = 2; w <= 48; ++w) EXPECT_GE(tmws_raw(w, 1), tmws_raw(w - 1, 1));
  EXPECT_THROW(tmws(0, 1), std::out_of_range);
  EXPECT_THROW(tmws(49, 1), std::out_of_range);
  EXPECT_THROW(tmws(1, 33), std::out_of_range);
  EXPECT_THROW(tmws(1, 0), std::out_of_range);
}

TEST(Energy, FourBlockInterMwsRatio) {
  EXPECT_NEAR(inter_mws_energy_ratio(4), 0.47, 0.02);
  EXPECT_DOUBLE_EQ(inter_mws_energy_ratio(1), 1.0);
  for (uint32_t b = 2; b <= 32; ++b) EXPECT_LT(inter_mws_energy_ratio(b), inter_mws_energy_ratio(b - 1));
}

TEST(Params, Validation) {
  TimingParams t;
  EXPECT_NO_THROW(t.validate());
  t.channel_bw = 0;
  EXPECT_THROW(t.validate(), ConfigError);
  t = TimingParams{};
  t.inter_anchors = {{1, 1.0}, {4, 0.9}};
  EXPECT_THROW(t.validate(), ConfigError);
  t = TimingParams{};
  t.t_mws_capped_us = 10;
  EXPECT_THROW(t.validate(), ConfigError);
  PowerParams p;
  EXPECT_NO_THROW(p.validate());
  p.inter_block_scale = {{1, 2.0}, {2, 3.0}};
  EXPECT_THROW(p.validate(), ConfigError);
  EXPECT_EQ(t.t_prog_us(ProgramMode::ESP), 400.0);
}

TEST(Systems, Names) {
  for (auto s : kAllSystems) EXPECT_EQ(system_from_string(to_string(s)), s);
  EXPECT_EQ(system_from_string("fc"), SystemModel::FC);
  EXPECT_THROW(system_from_string("gpu"), ConfigError);
}

namespace {

QueryProfile and_query(uint64_t bits, uint32_t operands) {
  QueryProfile q;
  q.vector_bits = bits;
  q.operands = operands;
  q.pb_sensings = {{operands, 1, 1}};
  q.fc_sensings = {{(operands + 47) / 48, 1, std::min(operands, 48u)}};
  return q;
}

ChipGeometry small() {
  ChipGeometry g = ChipGeometry::toy(4096, 64, 48);
  g.channels = 2;
  g.dies_per_channel = 2;
  g.planes_per_die = 2;
  return g;
}

}  // namespace

TEST(Timeline, SingleStageReducesToBusyTime) {
  ChipGeometry g = ChipGeometry::toy(4096, 64, 48);
  const QueryProfile q = and_query(g.bitlines_per_block(), 1);
  const auto r = simulate_timeline({&q, 1}, SystemModel::FC, g);
  // One page, one item: latency is the sum of every stage once.
  const double want = 25.0 + transfer_us(4096, 1.2e9) + transfer_us(4096, 8e9);
  EXPECT_NEAR(r.latency_us, want, 1e-9);
}

TEST(Timeline, MatchesFlowShopForUniformRows) {
  const auto g = small();
  for (auto sys : kAllSystems) {
    for (uint64_t rows : {1ull, 3ull, 17ull}) {
      const uint64_t pages = rows * g.planes_total();
      const QueryProfile q = and_query(pages * g.bitlines_per_block(), 6);
      const auto r = simulate_timeline({&q, 1}, sys, g);
      // Per-row service times of each stage; every row is identical.
      const double n = static_cast<double>(rows);
      const std::vector<double> t{r.busy.sense_us / n, r.busy.channel_us / n, r.busy.external_us / n,
                                  r.busy.compute_us / n};
      EXPECT_NEAR(r.latency_us, oracle::flow_shop(t, rows), 1e-6 * r.latency_us)
          << to_string(sys) << " rows=" << rows;
    }
  }
}

TEST(Timeline, StageVolumes) {
  const auto g = small();
  const uint64_t pages = 4 * g.planes_total();
  const double bytes = pages * 4096.0;
  const QueryProfile q = and_query(pages * g.bitlines_per_block(), 10);
  const auto osp = simulate_timeline({&q, 1}, SystemModel::OSP, g);
  const auto isp = simulate_timeline({&q, 1}, SystemModel::ISP, g);
  const auto fc = simulate_timeline({&q, 1}, SystemModel::FC, g);
  const auto pb = simulate_timeline({&q, 1}, SystemModel::PB, g);
  EXPECT_DOUBLE_EQ(osp.bytes_channel, 10 * bytes);
  EXPECT_DOUBLE_EQ(osp.bytes_external, 10 * bytes);
  EXPECT_DOUBLE_EQ(isp.bytes_channel, 10 * bytes);
  EXPECT_DOUBLE_EQ(isp.bytes_external, bytes);
  EXPECT_DOUBLE_EQ(fc.bytes_channel, bytes);
  EXPECT_DOUBLE_EQ(pb.bytes_external, bytes);
  EXPECT_EQ(fc.sensings_per_plane, 4u);
  EXPECT_EQ(pb.sensings_per_plane, 40u);
  EXPECT_NEAR(osp.busy.sense_us, 4 * 10 * 22.5, 1e-9);  // planes of a die sense together
  EXPECT_NEAR(osp.busy.channel_us, transfer_us(10 * bytes / g.channels, 1.2e9), 1e-6);
}

TEST(Timeline, SystemOrderingAndEnergyConservation) {
  const auto g = ChipGeometry::standard();
  for (uint32_t ops : {2u, 8u, 48u, 200u}) {
    const QueryProfile q = and_query(uint64_t{1} << 33, ops);
    const auto osp = simulate_timeline({&q, 1}, SystemModel::OSP, g);
    const auto isp = simulate_timeline({&q, 1}, SystemModel::ISP, g);
    const auto pb = simulate_timeline({&q, 1}, SystemModel::PB, g);
    const auto fc = simulate_timeline({&q, 1}, SystemModel::FC, g);
    EXPECT_LE(fc.latency_us, pb.latency_us * (1 + 1e-9)) << ops;
    EXPECT_LE(pb.latency_us, osp.latency_us) << ops;
    EXPECT_LE(isp.latency_us, osp.latency_us) << ops;
    EXPECT_LE(fc.energy.total(), osp.energy.total()) << ops;
    for (const auto& r : {osp, isp, pb, fc}) {
      const auto& e = r.energy;
      EXPECT_NEAR(e.total(), e.flash_j + e.channel_j + e.external_j + e.dram_j + e.compute_j + e.controller_j,
                  1e-12);
      EXPECT_NEAR(e.controller_j, 1.5 * r.latency_us * 1e-6, 1e-12);
      EXPECT_NEAR(e.channel_j, r.bytes_channel * 8 * 4e-12, 1e-12);
      EXPECT_GE(r.latency_us, std::max({r.busy.sense_us, r.busy.channel_us, r.busy.external_us,
                                        r.busy.compute_us}));
    }
    EXPECT_EQ(energy_of({&q, 1}, SystemModel::FC, g).total(), fc.energy.total());
  }
}

TEST(Timeline, RepeatScalesLinearly) {
  const auto g = small();
  QueryProfile q = and_query(64 * g.bitlines_per_block(), 5);
  const auto one = simulate_timeline({&q, 1}, SystemModel::PB, g);
  q.repeat = 10;
  const auto ten = simulate_timeline({&q, 1}, SystemModel::PB, g);
  EXPECT_NEAR(ten.busy.sense_us, 10 * one.busy.sense_us, 1e-6);
  EXPECT_NEAR(ten.energy.flash_j, 10 * one.energy.flash_j, 1e-15);
  EXPECT_EQ(ten.sensings_per_plane, 10 * one.sensings_per_plane);
}

TEST(Timeline, EmptyQuery) {
  const QueryProfile q;
  EXPECT_EQ(simulate_timeline({&q, 1}, SystemModel::FC, small()).latency_us, 0.0);
}

TEST(Isp, AccelEnergy) {
  EXPECT_DOUBLE_EQ(isp_accel_energy_j(6400, 3), 100 * 93e-12 * 2);
  EXPECT_EQ(isp_accel_energy_j(6400, 1), 0.0);
}
