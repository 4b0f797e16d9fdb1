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

#include "flashbit/config.hpp"

#include <fstream>
#include <set>

#include <fmt/format.h>

#include "flashbit/error.hpp"

namespace flashbit {
namespace {

using nlohmann::json;

// Rejects keys outside `known`, so typos fail loudly.
void check_keys(const json& j, const std::set<std::string>& known, const char* section) {
  if (!j.is_object()) throw ConfigError(fmt::format("{} must be an object", section));
  for (const auto& [k, v] : j.items()) {
    if (!known.count(k)) throw ConfigError(fmt::format("unknown key '{}' in {}", k, section));
  }
}

template <class T>
void get(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("bad value for '{}': {}", key, e.what()));
  }
}

void get_anchors(const json& j, const char* key, Anchors& out) {
  if (!j.contains(key)) return;
  out.clear();
  for (const auto& a : j.at(key)) {
    if (!a.is_array() || a.size() != 2) throw ConfigError(fmt::format("{} entries must be pairs", key));
    out.emplace_back(a[0].get<double>(), a[1].get<double>());
  }
}

// A scalar or a list of values to sweep.
template <class T>
std::vector<T> sweep(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return {fallback};
  const auto& v = j.at(key);
  if (v.is_array()) {
    if (v.empty()) throw ConfigError(fmt::format("empty sweep for '{}'", key));
    return v.get<std::vector<T>>();
  }
  return {v.get<T>()};
}

std::vector<WorkloadSpec> parse_workload(const json& j) {
  const std::string kind = j.value("kind", "");
  std::vector<WorkloadSpec> out;
  if (kind == "bmi") {
    check_keys(j, {"kind", "users", "months", "activity"}, "bmi workload");
    BmiSpec b;
    get(j, "users", b.users);
    get(j, "activity", b.activity);
    if (b.activity < 0 || b.activity > 1) throw ConfigError("activity must lie in [0,1]");
    for (auto m : sweep<uint32_t>(j, "months", b.months)) {
      if (m == 0) throw ConfigError("months must be >= 1");
      b.months = m;
      out.push_back(b);
    }
  } else if (kind == "ims") {
    check_keys(j, {"kind", "images", "width", "height", "colors"}, "ims workload");
    ImsSpec s;
    get(j, "width", s.width);
    get(j, "height", s.height);
    get(j, "colors", s.colors);
    for (auto i : sweep<uint64_t>(j, "images", s.images)) {
      s.images = i;
      out.push_back(s);
    }
  } else if (kind == "kcs") {
    check_keys(j, {"kind", "vertices", "cliques", "k", "edge_probability"}, "kcs workload");
    KcsSpec s;
    get(j, "vertices", s.vertices);
    get(j, "cliques", s.cliques);
    get(j, "edge_probability", s.edge_probability);
    for (auto k : sweep<uint32_t>(j, "k", s.k)) {
      if (k < 1) throw ConfigError("k must be >= 1");
      s.k = k;
      out.push_back(s);
    }
  } else {
    throw ConfigError(fmt::format("unknown workload kind '{}'", kind));
  }
  for (const auto& w : out) {
    if (vector_bits(w) == 0) throw ConfigError("workload has zero-length vectors");
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  ExperimentConfig c;
  if (j.is_null()) {
    c.workloads = default_sweep();
    return c;
  }
  check_keys(j, {"geometry", "timing", "power", "rber", "max_mws_blocks", "workloads", "functional"},
             "config");
  if (j.contains("geometry")) {
    const auto& g = j["geometry"];
    check_keys(g, {"channels", "dies_per_channel", "planes_per_die", "blocks_per_plane",
                   "wordlines_per_block", "page_bytes"}, "geometry");
    get(g, "channels", c.geometry.channels);
    get(g, "dies_per_channel", c.geometry.dies_per_channel);
    get(g, "planes_per_die", c.geometry.planes_per_die);
    get(g, "blocks_per_plane", c.geometry.blocks_per_plane);
    get(g, "wordlines_per_block", c.geometry.wordlines_per_block);
    get(g, "page_bytes", c.geometry.page_bytes);
  }
  if (j.contains("timing")) {
    const auto& t = j["timing"];
    check_keys(t, {"t_read_us", "t_mws_capped_us", "mws_cap_blocks", "t_prog_slc_us", "t_prog_mlc_us",
                   "t_prog_tlc_us", "t_esp_us", "t_bers_us", "channel_bw", "external_bw", "host_bw",
                   "accel_bw", "intra_anchors", "inter_anchors"}, "timing");
    auto& p = c.timing;
    get(t, "t_read_us", p.t_read_us);
    get(t, "t_mws_capped_us", p.t_mws_capped_us);
    get(t, "mws_cap_blocks", p.mws_cap_blocks);
    get(t, "t_prog_slc_us", p.t_prog_slc_us);
    get(t, "t_prog_mlc_us", p.t_prog_mlc_us);
    get(t, "t_prog_tlc_us", p.t_prog_tlc_us);
    get(t, "t_esp_us", p.t_esp_us);
    get(t, "t_bers_us", p.t_bers_us);
    get(t, "channel_bw", p.channel_bw);
    get(t, "external_bw", p.external_bw);
    get(t, "host_bw", p.host_bw);
    get(t, "accel_bw", p.accel_bw);
    get_anchors(t, "intra_anchors", p.intra_anchors);
    get_anchors(t, "inter_anchors", p.inter_anchors);
  }
  if (j.contains("power")) {
    const auto& t = j["power"];
    check_keys(t, {"inter_block_scale", "erase_scale", "read_power_w", "isp_accel_pj_per_op",
                   "channel_pj_per_bit", "external_pj_per_bit", "dram_pj_per_bit", "host_pj_per_byte",
                   "controller_power_w"}, "power");
    auto& p = c.power;
    get_anchors(t, "inter_block_scale", p.inter_block_scale);
    get(t, "erase_scale", p.erase_scale);
    get(t, "read_power_w", p.read_power_w);
    get(t, "isp_accel_pj_per_op", p.isp_accel_pj_per_op);
    get(t, "channel_pj_per_bit", p.channel_pj_per_bit);
    get(t, "external_pj_per_bit", p.external_pj_per_bit);
    get(t, "dram_pj_per_bit", p.dram_pj_per_bit);
    get(t, "host_pj_per_byte", p.host_pj_per_byte);
    get(t, "controller_power_w", p.controller_power_w);
  }
  if (j.contains("rber")) {
    const auto& t = j["rber"];
    check_keys(t, {"slc_randomized", "mlc_randomized", "tlc_randomized", "slc_no_randomization_factor",
                   "mlc_no_randomization_factor", "tlc_no_randomization_factor", "esp_curve",
                   "reference_pec", "reference_retention_days", "pec_exponent", "retention_exponent"},
               "rber");
    auto& r = c.rber;
    get(t, "slc_randomized", r.slc_randomized);
    get(t, "mlc_randomized", r.mlc_randomized);
    get(t, "tlc_randomized", r.tlc_randomized);
    get(t, "slc_no_randomization_factor", r.slc_no_randomization_factor);
    get(t, "mlc_no_randomization_factor", r.mlc_no_randomization_factor);
    get(t, "tlc_no_randomization_factor", r.tlc_no_randomization_factor);
    get_anchors(t, "esp_curve", r.esp_curve);
    get(t, "reference_pec", r.reference_pec);
    get(t, "reference_retention_days", r.reference_retention_days);
    get(t, "pec_exponent", r.pec_exponent);
    get(t, "retention_exponent", r.retention_exponent);
  }
  get(j, "max_mws_blocks", c.max_mws_blocks);
  get(j, "functional", c.functional);
  if (j.contains("workloads")) {
    for (const auto& w : j["workloads"]) {
      for (auto& s : parse_workload(w)) c.workloads.push_back(std::move(s));
    }
  } else {
    c.workloads = default_sweep();
  }
  c.geometry.validate();
  c.timing.validate();
  c.power.validate();
  c.rber.validate();
  if (c.max_mws_blocks < 1 || c.max_mws_blocks > kMaxAddressGroups) {
    throw ConfigError("max_mws_blocks for planned workloads must lie in [1,4]");
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("{}: {}", path, e.what()));
  }
  return parse_config(j);
}

std::vector<WorkloadSpec> default_sweep() {
  std::vector<WorkloadSpec> out;
  for (uint32_t m : {1, 3, 6, 12, 24, 36}) out.push_back(BmiSpec{800'000'000, m, 0.5});
  for (uint64_t i : {10'000, 50'000, 100'000, 200'000}) {
    ImsSpec s;
    s.images = i;
    out.push_back(s);
  }
  for (uint32_t k : {8, 16, 32, 64}) out.push_back(KcsSpec{32'000'000, 1024, k, 0.05});
  return out;
}

}  // namespace flashbit
