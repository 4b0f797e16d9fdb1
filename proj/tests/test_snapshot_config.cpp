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

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "flashbit/config.hpp"
#include "flashbit/error.hpp"
#include "flashbit/sensing.hpp"
#include "flashbit/snapshot.hpp"

using namespace flashbit;
using nlohmann::json;

namespace {

ChipState sample_chip() {
  ChipState c(ChipGeometry::toy(4, 6, 8), 77);
  c.program_page({0, 0, 0}, random_bits(32, 1), ProgramMode::ESP, false, std::nullopt, 2.5);
  c.program_page({0, 0, 3}, random_bits(32, 2), ProgramMode::SLC, true);
  c.program_page({0, 4, 7}, random_bits(32, 3), ProgramMode::TLC, false, false);
  c.set_wear(0, 4, 1200, 10.5);
  mws_execute(c, {0, {{0, 0b1001}}}, {false, true, true, true});
  c.next_sense_id();
  c.set_max_mws_blocks(6);
  return c;
}

}  // namespace

TEST(Snapshot, RoundTripPreservesState) {
  const ChipState a = sample_chip();
  const auto bytes = save_snapshot(a);
  ASSERT_GE(bytes.size(), 4u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "FCSM");
  const ChipState b = load_snapshot(bytes);
  EXPECT_EQ(b.geometry(), a.geometry());
  EXPECT_EQ(b.seed(), a.seed());
  EXPECT_EQ(b.sense_counter(), a.sense_counter());
  EXPECT_EQ(b.max_mws_blocks(), 6u);
  EXPECT_EQ(b.pe_cycles(0, 4), 1200u);
  EXPECT_DOUBLE_EQ(b.retention_days(0, 4), 10.5);
  EXPECT_EQ(b.latches(0).s_latch, a.latches(0).s_latch);
  EXPECT_EQ(b.latches(0).c_latch, a.latches(0).c_latch);
  const auto pa = a.programmed_pages(), pb = b.programmed_pages();
  ASSERT_EQ(pa.size(), pb.size());
  for (size_t i = 0; i < pa.size(); ++i) {
    EXPECT_EQ(pa[i].first, pb[i].first);
    EXPECT_EQ(pa[i].second.mode, pb[i].second.mode);
    EXPECT_EQ(pa[i].second.randomized, pb[i].second.randomized);
    EXPECT_EQ(pa[i].second.data, pb[i].second.data);
    EXPECT_DOUBLE_EQ(pa[i].second.tesp_ratio, pb[i].second.tesp_ratio);
  }
  EXPECT_EQ(save_snapshot(b), bytes);
}

TEST(Snapshot, RejectsDamagedImages) {
  const auto good = save_snapshot(sample_chip());
  auto bad = good;
  bad[0] = 'X';
  EXPECT_THROW(load_snapshot(bad), SnapshotError);
  bad = good;
  bad[4] = 9;  // version
  EXPECT_THROW(load_snapshot(bad), SnapshotError);
  bad = good;
  bad[6] = kSnapshotFlagZstd;
  EXPECT_THROW(load_snapshot(bad), SnapshotError);
  bad = good;
  bad[6] = 0x4;
  EXPECT_THROW(load_snapshot(bad), SnapshotError);
  for (size_t cut : {size_t{3}, size_t{20}, good.size() - 1}) {
    EXPECT_THROW(load_snapshot(std::span(good).first(cut)), SnapshotError) << cut;
  }
  bad = good;
  bad.push_back(0);
  EXPECT_THROW(load_snapshot(bad), SnapshotError);
}

TEST(Snapshot, FileVariants) {
  const auto path = (std::filesystem::temp_directory_path() / "flashbit_snapshot_test.bin").string();
  save_snapshot_file(sample_chip(), path);
  EXPECT_EQ(load_snapshot_file(path).programmed_pages().size(), 3u);
  std::remove(path.c_str());
  EXPECT_THROW(load_snapshot_file(path), SnapshotError);
}

TEST(Config, NullGivesDefaultsAndSweep) {
  const auto c = parse_config(json());
  EXPECT_EQ(c.geometry, ChipGeometry::standard());
  EXPECT_EQ(c.max_mws_blocks, 4u);
  EXPECT_EQ(c.workloads.size(), default_sweep().size());
  EXPECT_EQ(default_sweep().size(), 6u + 4u + 4u);
}

TEST(Config, SweepsExpandLists) {
  const auto c = parse_config(json::parse(R"({
    "geometry": {"channels": 2, "page_bytes": 64},
    "timing": {"t_read_us": 20, "inter_anchors": [[1, 1.0], [4, 1.1], [32, 1.2]]},
    "max_mws_blocks": 2,
    "functional": true,
    "workloads": [{"kind": "bmi", "users": 100, "months": [1, 2, 3]},
                  {"kind": "kcs", "vertices": 50, "cliques": 2, "k": 4}]
  })"));
  EXPECT_EQ(c.geometry.channels, 2u);
  EXPECT_EQ(c.geometry.page_bytes, 64u);
  EXPECT_EQ(c.timing.t_read_us, 20.0);
  EXPECT_EQ(c.timing.inter_anchors.size(), 3u);
  EXPECT_TRUE(c.functional);
  ASSERT_EQ(c.workloads.size(), 4u);
  EXPECT_EQ(std::get<BmiSpec>(c.workloads[2]).months, 3u);
  EXPECT_EQ(std::get<KcsSpec>(c.workloads[3]).k, 4u);
}

TEST(Config, StrictErrors) {
  for (const char* bad : {R"({"geometry": {"chanels": 2}})", R"({"bogus": 1})",
                          R"({"max_mws_blocks": 9})", R"({"max_mws_blocks": 0})",
                          R"({"workloads": [{"kind": "sort"}]})", R"({"geometry": {"wordlines_per_block": 80}})",
                          R"({"geometry": {"channels": "eight"}})", R"({"workloads": [{"kind": "bmi", "colour": 1}]})",
                          R"({"rber": {"esp_curve": [[1.0, 1e-6], [2.0, 1e-3]]}})"}) {
    EXPECT_THROW(parse_config(json::parse(bad)), ConfigError) << bad;
  }
}

TEST(Config, LoadFileAllowsComments) {
  const auto path = (std::filesystem::temp_directory_path() / "flashbit_cfg_test.json").string();
  {
    std::ofstream o(path);
    o << "// desk\n{\"geometry\": {\"dies_per_channel\": 2} /* two */}\n";
  }
  EXPECT_EQ(load_config(path).geometry.dies_per_channel, 2u);
  std::remove(path.c_str());
  EXPECT_THROW(load_config(path), ConfigError);
}
