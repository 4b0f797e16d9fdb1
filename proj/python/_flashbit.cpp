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

// Python bindings for the chip model, codec, planner and timing model.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "flashbit/commands.hpp"
#include "flashbit/config.hpp"
#include "flashbit/error.hpp"
#include "flashbit/fuzz.hpp"
#include "flashbit/planner.hpp"
#include "flashbit/workloads.hpp"

namespace py = pybind11;
using namespace flashbit;

namespace {

py::bytes to_py(const BitVector& v) {
  const auto b = to_bytes(v);
  return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
}

BitVector from_py(const py::bytes& b, size_t nbits) {
  const std::string s = b;
  if (s.size() * 8 < nbits) throw py::value_error("not enough bytes for the page width");
  return from_bytes({reinterpret_cast<const uint8_t*>(s.data()), s.size()}, nbits);
}

py::dict stats_dict(const PlanStats& s) {
  py::dict d;
  d["sensings"] = s.sensings;
  d["frames"] = s.frames;
  d["xor_frames"] = s.xor_frames;
  d["readouts"] = s.readouts;
  d["host_ops"] = s.host_ops;
  d["chains"] = s.chains;
  d["blocks_per_frame"] = s.blocks_per_frame;
  d["max_wordlines"] = s.max_wordlines;
  return d;
}

// Compiles `text` against a fresh placement and returns frames and stats.
py::dict compile_text(const std::string& text, const ChipGeometry& g, const std::string& policy,
                      const std::string& system) {
  const Expr e = parse_expr(text);
  const auto vars = variables(e);
  std::vector<PlacementHint> hints;
  if (policy == "auto") hints = derive_hints(e);
  else if (policy != "direct") throw py::value_error("placement must be 'auto' or 'direct'");
  const auto placement = place(vars, hints, g, g.bitlines_per_block());
  CompileOptions o;
  o.multi_wordline = system == "fc";
  const Plan plan = compile(e, placement, o);
  py::list frames;
  for (const auto& step : plan.steps) {
    if (const auto* f = std::get_if<FrameStep>(&step)) frames.append(to_hex(encode(f->frame)));
  }
  py::dict d;
  d["frames"] = frames;
  d["stats"] = stats_dict(plan_stats(plan, g));
  d["host_fallback"] = plan.host_fallback;
  d["json"] = plan_to_json(plan, placement).dump();
  d["text"] = describe(plan, g);
  return d;
}

// Stores the operands on a toy chip, runs the compiled plan and returns the
// result bytes.
py::bytes evaluate_text(const std::string& text, const py::dict& operands, uint32_t bits,
                        const std::string& system) {
  if (bits == 0 || bits % 8) throw py::value_error("bits must be a positive multiple of 8");
  const Expr e = parse_expr(text);
  VectorMap vm;
  for (auto [k, v] : operands) vm[py::cast<std::string>(k)] = from_py(py::cast<py::bytes>(v), bits);
  const auto names = variables(e);
  const auto g = ChipGeometry::toy(bits / 8, 2 * static_cast<uint32_t>(names.size()) + 2);
  PlacementOptions po;
  po.mode = system == "fc" ? ProgramMode::ESP : ProgramMode::SLC;
  const auto placement = place(names, derive_hints(e), g, bits, po);
  FlashArray array(g, 0);
  store(array, placement, vm);
  CompileOptions o;
  o.multi_wordline = system == "fc";
  return to_py(execute(compile(e, placement, o), array, placement));
}

py::dict decode_hex(const std::string& hex) {
  const auto bytes = from_hex(hex);
  const auto f = decode(bytes);
  py::dict d;
  if (const auto* m = std::get_if<MwsFrame>(&f)) {
    d["op"] = "mws";
    d["inverse"] = m->flags.inverse;
    d["init_s"] = m->flags.init_s;
    d["init_c"] = m->flags.init_c;
    d["move"] = m->flags.move_s_to_c;
    py::list groups;
    for (const auto& g : m->groups) groups.append(py::make_tuple(g.block, g.pbm));
    d["groups"] = groups;
  } else if (const auto* e = std::get_if<EspFrame>(&f)) {
    d["op"] = "esp";
    d["block"] = e->block;
    d["wordline"] = e->wordline;
    d["payload"] = py::bytes(reinterpret_cast<const char*>(e->payload.data()), e->payload.size());
  } else {
    d["op"] = "xor";
    d["plane"] = std::get<XorFrame>(f).plane;
  }
  return d;
}

std::string encode_mws(const std::vector<std::pair<uint32_t, uint64_t>>& groups, bool inverse,
                       bool init_s, bool init_c, bool move) {
  MwsFrame f;
  f.flags = {inverse, init_s, init_c, move};
  for (auto [b, p] : groups) f.groups.push_back({b, p});
  return to_hex(encode(f));
}

WorkloadSpec make_spec(const std::string& kind, uint64_t param) {
  if (kind == "bmi") return BmiSpec{800'000'000, static_cast<uint32_t>(param), 0.5};
  if (kind == "ims") {
    ImsSpec s;
    s.images = param;
    return s;
  }
  if (kind == "kcs") return KcsSpec{32'000'000, 1024, static_cast<uint32_t>(param), 0.05};
  throw py::value_error("kind must be bmi, ims or kcs");
}

py::dict simulate(const std::string& kind, uint64_t param, const std::string& system) {
  RunOptions o;
  const auto r = run(make_spec(kind, param), system_from_string(system), o);
  py::dict d;
  d["latency_us"] = r.timeline.latency_us;
  d["energy_j"] = r.timeline.energy.total();
  d["sense_us"] = r.timeline.busy.sense_us;
  d["channel_us"] = r.timeline.busy.channel_us;
  d["external_us"] = r.timeline.busy.external_us;
  d["compute_us"] = r.timeline.busy.compute_us;
  return d;
}

}  // namespace

PYBIND11_MODULE(_flashbit, m) {
  m.doc() = "In-flash bulk bitwise simulator";

  py::register_exception<Error>(m, "FlashError", PyExc_RuntimeError);

  py::enum_<ProgramMode>(m, "ProgramMode")
      .value("Erased", ProgramMode::Erased)
      .value("SLC", ProgramMode::SLC)
      .value("ESP", ProgramMode::ESP)
      .value("MLC", ProgramMode::MLC)
      .value("TLC", ProgramMode::TLC);

  py::class_<ChipGeometry>(m, "ChipGeometry")
      .def(py::init<>())
      .def_readwrite("channels", &ChipGeometry::channels)
      .def_readwrite("dies_per_channel", &ChipGeometry::dies_per_channel)
      .def_readwrite("planes_per_die", &ChipGeometry::planes_per_die)
      .def_readwrite("blocks_per_plane", &ChipGeometry::blocks_per_plane)
      .def_readwrite("wordlines_per_block", &ChipGeometry::wordlines_per_block)
      .def_readwrite("page_bytes", &ChipGeometry::page_bytes)
      .def_property_readonly("bitlines_per_block", &ChipGeometry::bitlines_per_block)
      .def("validate", &ChipGeometry::validate)
      .def_static("standard", &ChipGeometry::standard)
      .def_static("toy", &ChipGeometry::toy, py::arg("page_bytes"), py::arg("blocks") = 16,
                  py::arg("wordlines") = 48);

  py::class_<ChipState>(m, "Chip")
      .def(py::init<const ChipGeometry&, uint64_t>(), py::arg("geometry"), py::arg("seed") = 0)
      .def("erase_block", &ChipState::erase_block, py::arg("plane"), py::arg("block"))
      .def(
          "program_page",
          [](ChipState& c, uint32_t plane, uint32_t block, uint32_t wl, const py::bytes& data,
             ProgramMode mode, bool inverted) {
            c.program_page({plane, block, wl}, from_py(data, c.geometry().bitlines_per_block()), mode,
                           inverted);
          },
          py::arg("plane"), py::arg("block"), py::arg("wordline"), py::arg("data"),
          py::arg("mode") = ProgramMode::ESP, py::arg("inverted") = false)
      .def(
          "read_page",
          [](ChipState& c, uint32_t plane, uint32_t block, uint32_t wl, bool inverse) {
            return to_py(c.read_page({plane, block, wl}, inverse));
          },
          py::arg("plane"), py::arg("block"), py::arg("wordline"), py::arg("inverse") = false)
      .def(
          "mws",
          [](ChipState& c, uint32_t plane, const std::vector<std::pair<uint32_t, uint64_t>>& blocks,
             bool inverse, bool init_s, bool init_c, bool move) {
            MwsTarget t{plane, {}};
            for (auto [b, p] : blocks) t.blocks.push_back({b, p});
            mws_execute(c, t, {inverse, init_s, init_c, move});
          },
          py::arg("plane"), py::arg("blocks"), py::arg("inverse") = false, py::arg("init_s") = true,
          py::arg("init_c") = true, py::arg("move") = true)
      .def("xor", [](ChipState& c, uint32_t plane) { xor_latches(c, plane); }, py::arg("plane") = 0)
      .def("cache", [](const ChipState& c, uint32_t plane) { return to_py(read_cache(c, plane)); },
           py::arg("plane") = 0)
      .def("set_wear", &ChipState::set_wear)
      .def("page_error_rate",
           [](const ChipState& c, uint32_t plane, uint32_t block, uint32_t wl) {
             return c.page_error_rate({plane, block, wl});
           });

  m.def("tmws", [](uint32_t w, uint32_t b) { return tmws(w, b); }, py::arg("intra_wordlines"),
        py::arg("inter_blocks"));
  m.def("tmws_raw", [](uint32_t w, uint32_t b) { return tmws_raw(w, b); }, py::arg("intra_wordlines"),
        py::arg("inter_blocks"));
  m.def("transfer_us", &transfer_us, py::arg("bytes"), py::arg("bandwidth"));
  m.def("inter_mws_energy_ratio", [](uint32_t blocks) { return inter_mws_energy_ratio(blocks); },
        py::arg("blocks"));
  m.def(
      "rber",
      [](ProgramMode mode, bool randomized, uint64_t pec, double retention_days, double tesp_ratio) {
        return rber(RberModel{}, mode, randomized, pec, retention_days, tesp_ratio);
      },
      py::arg("mode"), py::arg("randomized") = true, py::arg("pec") = 0, py::arg("retention_days") = 0.0,
      py::arg("tesp_ratio") = kDefaultTespRatio);

  m.def("normalize", [](const std::string& text) { return to_string(parse_expr(text)); },
        py::arg("expression"));
  m.def("variables", [](const std::string& text) { return variables(parse_expr(text)); },
        py::arg("expression"));
  m.def("compile", &compile_text, py::arg("expression"), py::arg("geometry") = ChipGeometry::toy(8),
        py::arg("placement") = "auto", py::arg("system") = "fc");
  m.def("evaluate", &evaluate_text, py::arg("expression"), py::arg("operands"), py::arg("bits"),
        py::arg("system") = "fc");
  m.def("encode_mws", &encode_mws, py::arg("groups"), py::arg("inverse") = false, py::arg("init_s") = true,
        py::arg("init_c") = true, py::arg("move") = true);
  m.def("decode", &decode_hex, py::arg("hex"));
  m.def("simulate", &simulate, py::arg("workload"), py::arg("param"), py::arg("system"));
  m.def(
      "verify",
      [](uint64_t seed, uint64_t cases, uint32_t bits) {
        uint64_t passed = 0;
        for (uint64_t i = 0; i < cases; ++i) {
          const auto c = run_fuzz_case(mix_seed(seed, i), bits);
          passed += c.result == eval(c.expr, c.vectors);
        }
        return passed;
      },
      py::arg("seed"), py::arg("cases") = 100, py::arg("bits") = 64);
}
