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

#include "flashbit/reliability.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <random>

#include "flashbit/error.hpp"

namespace flashbit {
namespace {

std::atomic<bool> g_range_warned{false};

void warn_out_of_range(const char* what) {
  if (!g_range_warned.exchange(true)) {
    std::cerr << "flashbit: rber input outside calibrated range (" << what << "), clamping\n";
  }
}

uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

uint64_t mix_seed(uint64_t a, uint64_t b, uint64_t c) {
  return splitmix64(splitmix64(splitmix64(a) ^ b) ^ c);
}

double RberModel::esp_rate(double tesp_ratio) const {
  if (esp_curve.empty()) return 0.0;
  if (tesp_ratio <= esp_curve.front().first) return esp_curve.front().second;
  if (tesp_ratio >= esp_curve.back().first) return esp_curve.back().second;
  for (size_t i = 0; i + 1 < esp_curve.size(); ++i) {
    const auto [x0, y0] = esp_curve[i];
    const auto [x1, y1] = esp_curve[i + 1];
    if (tesp_ratio < x0 || tesp_ratio >= x1) continue;
    const double t = (tesp_ratio - x0) / (x1 - x0);
    if (y0 > 0 && y1 > 0) return std::exp(std::log(y0) + t * (std::log(y1) - std::log(y0)));
    return y0 + t * (y1 - y0);
  }
  return esp_curve.back().second;
}

double RberModel::wear_factor(uint64_t pec, double retention_days) const {
  retention_days = std::max(retention_days, 0.0);
  const double p = std::pow((1.0 + static_cast<double>(pec)) / (1.0 + reference_pec), pec_exponent);
  const double r =
      std::pow((1.0 + retention_days) / (1.0 + reference_retention_days), retention_exponent);
  return p * r;
}

void RberModel::validate() const {
  for (double r : {slc_randomized, mlc_randomized, tlc_randomized}) {
    if (!(r >= 0.0 && r <= 1.0)) throw ConfigError("base rates must lie in [0,1]");
  }
  if (slc_no_randomization_factor < 1 || mlc_no_randomization_factor < 1 ||
      tlc_no_randomization_factor < 1) {
    throw ConfigError("randomization-off factors must be >= 1");
  }
  if (pec_exponent < 0 || retention_exponent < 0) {
    throw ConfigError("wear exponents must be non-negative");
  }
  for (size_t i = 0; i < esp_curve.size(); ++i) {
    const auto [x, y] = esp_curve[i];
    if (!(y >= 0.0 && y <= 1.0)) throw ConfigError("esp_curve rates must lie in [0,1]");
    if (i > 0 && (x <= esp_curve[i - 1].first || y > esp_curve[i - 1].second)) {
      throw ConfigError("esp_curve must be ascending in ratio and non-increasing in rate");
    }
  }
  if (!esp_curve.empty() && esp_curve.back().second != 0.0) {
    throw ConfigError("esp_curve must end at a zero-error anchor");
  }
}

double rber(const RberModel& model, ProgramMode mode, bool randomized, uint64_t pec,
            double retention_days, double tesp_ratio) {
  double base = 0.0;
  switch (mode) {
    case ProgramMode::Erased:
      return 0.0;
    case ProgramMode::SLC:
      base = model.slc_randomized * (randomized ? 1.0 : model.slc_no_randomization_factor);
      break;
    case ProgramMode::MLC:
      base = model.mlc_randomized * (randomized ? 1.0 : model.mlc_no_randomization_factor);
      break;
    case ProgramMode::TLC:
      base = model.tlc_randomized * (randomized ? 1.0 : model.tlc_no_randomization_factor);
      break;
    case ProgramMode::ESP:
      if (tesp_ratio < 1.0) {
        warn_out_of_range("tesp_ratio < 1");
        tesp_ratio = 1.0;
      }
      base = model.esp_rate(tesp_ratio);
      break;
  }
  if (retention_days < 0) {
    warn_out_of_range("negative retention");
    retention_days = 0;
  }
  const double rate = base * model.wear_factor(pec, retention_days);
  if (rate > 1.0) {
    warn_out_of_range("rate above 1");
    return 1.0;
  }
  return rate;
}

void inject_in_place(BitVector& data, double rate, uint64_t seed) {
  if (rate <= 0.0 || data.empty()) return;
  if (rate >= 1.0) {
    data.flip();
    return;
  }
  // Gaps between flips are geometric, so the cost scales with flips.
  std::mt19937_64 rng(seed);
  std::geometric_distribution<uint64_t> gap(rate);
  const uint64_t n = data.size();
  for (uint64_t pos = gap(rng); pos < n; pos += 1 + gap(rng)) {
    data.flip(pos);
  }
}

BitVector inject(const BitVector& data, double rate, uint64_t seed) {
  BitVector out = data;
  inject_in_place(out, rate, seed);
  return out;
}

}  // namespace flashbit
