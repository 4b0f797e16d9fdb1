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

// flashbit: characterize device models, compile expressions, run workload
// comparisons and fuzz the compiler against a direct evaluator.

#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <nlohmann/json.hpp>

#include "flashbit/config.hpp"
#include "flashbit/error.hpp"
#include "flashbit/fuzz.hpp"
#include "flashbit/planner.hpp"
#include "flashbit/workloads.hpp"

using namespace flashbit;

namespace {

constexpr int kUsage = 2;
constexpr const char* kRunCsvVersion = "# flashbit run csv v1";
constexpr const char* kCharCsvVersion = "# flashbit characterize csv v1";

struct Output {
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file.open(path);
      if (!file) throw ConfigError("cannot write " + path);
    }
  }
  std::ostream& os() { return file.is_open() ? static_cast<std::ostream&>(file) : std::cout; }
  std::ofstream file;
};

ExperimentConfig config_from(const std::string& path) {
  return path.empty() ? parse_config(nullptr) : load_config(path);
}

// Runs fn(i) for i in [0, n) on `jobs` threads.
template <class Fn>
void parallel_for(size_t n, unsigned jobs, Fn fn) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex m;
  for (unsigned t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      for (size_t i; (i = next++) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(m);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

int characterize(const std::string& config, const std::string& out_path) {
  const auto c = config_from(config);
  Output out(out_path);
  auto& os = out.os();
  os << kCharCsvVersion << '\n' << "curve,x,value,unit\n";
  for (uint32_t w = 1; w <= c.timing.max_intra_wordlines; ++w) {
    fmt::print(os, "intra_tmws_raw,{},{:.4f},us\n", w, tmws_raw(w, 1, c.timing));
  }
  for (uint32_t b = 1; b <= c.timing.max_inter_blocks; ++b) {
    fmt::print(os, "inter_tmws_raw,{},{:.4f},us\n", b, tmws_raw(1, b, c.timing));
    fmt::print(os, "inter_tmws,{},{:.4f},us\n", b, tmws(1, b, c.timing));
    fmt::print(os, "power_scale,{},{:.4f},x\n", b, c.power.scale(b));
    fmt::print(os, "energy_ratio,{},{:.4f},x\n", b, inter_mws_energy_ratio(b, c.timing, c.power));
  }
  for (auto mode : {ProgramMode::SLC, ProgramMode::MLC, ProgramMode::TLC}) {
    for (bool rnd : {true, false}) {
      for (uint64_t pec : {0, 1000, 3000, 10000}) {
        fmt::print(os, "rber_{}_{},{},{:.4e},ber\n", to_string(mode), rnd ? "rand" : "norand", pec,
                   rber(c.rber, mode, rnd, pec, 365.0));
      }
    }
  }
  for (int i = 10; i <= 20; ++i) {
    fmt::print(os, "rber_esp,{:.1f},{:.4e},ber\n", i / 10.0,
               rber(c.rber, ProgramMode::ESP, false, 10000, 365.0, i / 10.0));
  }
  return 0;
}

int plan_cmd(const std::string& config, const std::string& file, const std::string& policy,
             const std::string& system, const std::string& out_path) {
  std::ifstream in(file);
  if (!in) {
    std::cerr << "flashbit plan: cannot read " << file << '\n';
    return kUsage;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  Expr e;
  try {
    e = parse_expr(ss.str());
  } catch (const ParseError& err) {
    std::cerr << "flashbit plan: " << file << ": " << err.what() << '\n';
    return kUsage;
  }
  const auto c = config_from(config);
  const auto vars = variables(e);
  std::vector<PlacementHint> hints;
  if (policy == "auto") hints = derive_hints(e);
  const auto placement = place(vars, hints, c.geometry, c.geometry.bitlines_per_block());
  CompileOptions opts;
  opts.multi_wordline = system == "fc";
  opts.max_blocks_per_frame = c.max_mws_blocks;
  const Plan plan = compile(e, placement, opts);
  const auto st = plan_stats(plan, c.geometry);

  fmt::print("expression: {}\n", to_string(e));
  fmt::print("placement: {} variables in {} blocks\n", placement.vars.size(), placement.template_blocks);
  for (const auto& [name, loc] : placement.vars) {
    fmt::print("  {:<12} blk {:<4} wl {:<2}{}\n", name, loc.block, loc.wordline,
               loc.stored_inverted ? " inverted" : "");
  }
  fmt::print("plan ({}):\n{}", to_string(plan.system), describe(plan, c.geometry));
  fmt::print("frames:\n");
  for (const auto& step : plan.steps) {
    if (const auto* f = std::get_if<FrameStep>(&step)) fmt::print("  {}\n", to_hex(encode(f->frame)));
  }
  fmt::print("stats: sensings={} frames={} xor_frames={} readouts={} host_ops={} chains={} max_wordlines={}\n",
             st.sensings, st.frames, st.xor_frames, st.readouts, st.host_ops, st.chains, st.max_wordlines);

  if (!out_path.empty()) {
    std::string stem = out_path;
    if (stem.size() > 4 && stem.compare(stem.size() - 4, 4, ".bin") == 0) stem.resize(stem.size() - 4);
    const auto bytes = encode_plan(plan);
    std::ofstream bin(stem + ".bin", std::ios::binary);
    bin.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    std::ofstream js(stem + ".json");
    js << plan_to_json(plan, placement).dump(2) << '\n';
    if (!bin || !js) throw ConfigError("cannot write " + stem + ".{bin,json}");
  }
  return 0;
}

int run_cmd(const std::string& config, uint64_t seed, const std::string& out_path, unsigned jobs) {
  const auto c = config_from(config);
  RunOptions opts;
  opts.geometry = c.geometry;
  opts.timing = c.timing;
  opts.power = c.power;
  opts.rber = c.rber;
  opts.seed = seed;
  opts.functional = c.functional;

  struct Point {
    std::vector<RunResult> rows;
    std::string error;
  };
  std::vector<Point> points(c.workloads.size());
  parallel_for(points.size(), jobs, [&](size_t i) {
    for (auto s : kAllSystems) {
      try {
        points[i].rows.push_back(run(c.workloads[i], s, opts));
      } catch (const OracleMismatch& e) {
        points[i].error = e.what();
      }
    }
  });

  Output out(out_path);
  auto& os = out.os();
  os << kRunCsvVersion << '\n'
     << "workload,param,system,latency_us,energy_uJ,sense_us,channel_us,external_us,compute_us,"
        "flash_uJ,channel_uJ,external_uJ,dram_uJ,compute_uJ,controller_uJ,checked,correct,bit_errors\n";
  int status = 0;
  for (const auto& p : points) {
    for (const auto& r : p.rows) {
      const auto& t = r.timeline;
      const auto& e = t.energy;
      fmt::print(os, "{},{},{},{:.3f},{:.3f},{:.3f},{:.3f},{:.3f},{:.3f},{:.3f},{:.3f},{:.3f},{:.3f},{:.3f},{:.3f},{},{},{}\n",
                 r.workload, r.param, to_string(r.system), t.latency_us, e.total() * 1e6, t.busy.sense_us,
                 t.busy.channel_us, t.busy.external_us, t.busy.compute_us, e.flash_j * 1e6, e.channel_j * 1e6,
                 e.external_j * 1e6, e.dram_j * 1e6, e.compute_j * 1e6, e.controller_j * 1e6,
                 r.checked ? 1 : 0, r.correct ? 1 : 0, r.bit_errors);
    }
    if (!p.error.empty()) {
      std::cerr << "flashbit run: oracle mismatch: " << p.error << '\n';
      status = 1;
    }
  }
  return status;
}

int verify_cmd(uint64_t seed, uint64_t cases, uint32_t bits, unsigned jobs) {
  std::vector<uint8_t> ok(cases, 0);
  std::vector<std::string> first_failure(1);
  std::mutex m;
  parallel_for(cases, jobs, [&](size_t i) {
    const auto c = run_fuzz_case(mix_seed(seed, i), bits);
    ok[i] = c.result == eval(c.expr, c.vectors);
    if (!ok[i]) {
      std::lock_guard lock(m);
      if (first_failure[0].empty()) first_failure[0] = fmt::format("case {}: {}", i, to_string(c.expr));
    }
  });
  const auto passed = std::count(ok.begin(), ok.end(), 1);
  fmt::print("verify: seed={} cases={} bits={} passed={} failed={} -> {}\n", seed, cases, bits, passed,
             cases - passed, passed == static_cast<long>(cases) ? "PASS" : "FAIL");
  if (!first_failure[0].empty()) fmt::print("first failure: {}\n", first_failure[0]);
  return passed == static_cast<long>(cases) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flashbit: in-flash bulk bitwise simulator"};
  app.require_subcommand(1);
  std::string config, out;
  uint64_t seed = 0;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());

  auto* ch = app.add_subcommand("characterize", "Emit tMWS, power and RBER curves as CSV");
  ch->add_option("--config", config, "Experiment config (JSON)")->check(CLI::ExistingFile);
  ch->add_option("--out", out, "Output CSV (default stdout)");

  std::string file, policy = "auto", system = "fc";
  auto* pl = app.add_subcommand("plan", "Compile an expression file and print the plan");
  pl->add_option("expr", file, "Expression file")->required();
  pl->add_option("--config", config, "Experiment config (JSON)")->check(CLI::ExistingFile);
  pl->add_option("--placement", policy, "Placement policy")->check(CLI::IsMember({"auto", "direct"}));
  pl->add_option("--system", system, "Target system")->check(CLI::IsMember({"fc", "pb"}));
  pl->add_option("--out", out, "Write <out>.bin frames and a <out>.json sidecar");

  auto* rn = app.add_subcommand("run", "Run workload comparisons and emit CSV");
  rn->add_option("--config", config, "Experiment config (JSON)")->check(CLI::ExistingFile);
  rn->add_option("--seed", seed, "RNG seed")->required();
  rn->add_option("--out", out, "Output CSV (default stdout)");
  rn->add_option("--jobs", jobs, "Parallel experiment points")->check(CLI::PositiveNumber);

  uint64_t cases = 10000;
  uint32_t bits = 64;
  auto* vf = app.add_subcommand("verify", "Fuzz compiled plans against direct evaluation");
  vf->add_option("--seed", seed, "RNG seed")->required();
  vf->add_option("--cases", cases, "Number of random expressions");
  vf->add_option("--bits", bits, "Toy page width in bitlines")->check(CLI::IsMember(std::vector<uint32_t>{8, 16, 24, 32, 40, 48, 56, 64}));
  vf->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (ch->parsed()) return characterize(config, out);
    if (pl->parsed()) return plan_cmd(config, file, policy, system, out);
    if (rn->parsed()) return run_cmd(config, seed, out, jobs);
    if (vf->parsed()) return verify_cmd(seed, cases, bits, jobs);
  } catch (const ConfigError& e) {
    std::cerr << "flashbit: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "flashbit: " << e.what() << '\n';
    return 1;
  }
  return kUsage;
}
