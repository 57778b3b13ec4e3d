/* Copyright 2026 The maxent-ig Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

// Plain-file outputs: raw float64 dumps with JSON sidecars, and CSV tables.
// Numbers in CSV use 17 significant digits so reruns compare byte for byte.

#include <bit>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "maxent/ablation.hpp"
#include "maxent/attribution.hpp"
#include "maxent/baselines.hpp"

namespace maxent {

inline std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write " + path.string());
  return os;
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  auto os = open_output(path);
  os << j.dump(2) << '\n';
}

// Little-endian IEEE-754 doubles, row-major, no header.
inline void write_raw_f64(const std::filesystem::path& path, const Tensor& t) {
  auto os = open_output(path);
  for (double v : t) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    os.write(reinterpret_cast<const char*>(&bits), sizeof bits);
  }
}

inline Tensor read_raw_f64(const std::filesystem::path& path, const Shape& shape) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open " + path.string());
  Tensor t(shape);
  for (double& v : t) {
    std::uint64_t bits = 0;
    if (!is.read(reinterpret_cast<char*>(&bits), sizeof bits)) {
      throw DataError("raw dump truncated: " + path.string());
    }
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    v = std::bit_cast<double>(bits);
  }
  return t;
}

inline void write_two_column_csv(const std::filesystem::path& path, const std::string& x_name,
                                 const std::string& y_name, const std::vector<double>& xs,
                                 const std::vector<double>& ys) {
  auto os = open_output(path);
  os << x_name << ',' << y_name << '\n';
  for (std::size_t i = 0; i < xs.size(); ++i) {
    os << fmt_double(xs[i]) << ',' << fmt_double(ys[i]) << '\n';
  }
}

inline nlohmann::json baseline_sidecar(const BaselineSpec& b) {
  nlohmann::json j;
  j["kind"] = b.tag();
  j["shape"] = b.materialized.shape();
  j["seed"] = b.seed;
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : b.params) params[k] = v;
  j["params"] = params;
  j["achieved_entropy"] = b.achieved_entropy ? nlohmann::json(*b.achieved_entropy)
                                             : nlohmann::json(nullptr);
  j["format"] = "raw little-endian float64, row-major";
  return j;
}

// <stem>.f64 plus <stem>.json.
inline void export_baseline(const std::filesystem::path& stem, const BaselineSpec& b) {
  write_raw_f64(stem.string() + ".f64", b.materialized);
  write_json(stem.string() + ".json", baseline_sidecar(b));
}

// <stem>.csv (one row per image row, or one line for flat maps) plus <stem>.json.
inline void export_attribution(const std::filesystem::path& stem, const AttributionMap& a,
                               std::uint64_t seed) {
  auto os = open_output(stem.string() + ".csv");
  const Shape& s = a.values.shape();
  const std::size_t cols = s.empty() ? 1 : s.back();
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    os << fmt_double(a.values[i]) << ((i + 1) % cols == 0 ? '\n' : ',');
  }
  nlohmann::json j;
  j["method_tag"] = a.method_tag;
  j["baseline_tag"] = a.baseline_tag ? nlohmann::json(*a.baseline_tag) : nlohmann::json(nullptr);
  j["class"] = a.class_explained;
  j["seed"] = seed;
  j["shape"] = s;
  write_json(stem.string() + ".json", j);
}

inline std::string cell_name(const AblationReport& r) {
  return r.baseline_tag.empty() ? r.method_tag : r.method_tag + "_" + r.baseline_tag;
}

inline void write_cell_csv(const std::filesystem::path& path, const AblationReport& r) {
  auto os = open_output(path);
  os << "instance,score\n";
  for (std::size_t i = 0; i < r.scores.size(); ++i) {
    os << i << ',' << fmt_double(r.scores[i]) << '\n';
  }
}

// Rows: mean, median, variance; one column per cell.
inline void write_summary_csv(const std::filesystem::path& path,
                              const std::vector<AblationReport>& reports) {
  auto os = open_output(path);
  os << "statistic";
  for (const auto& r : reports) os << ',' << cell_name(r);
  os << '\n';
  auto row = [&](const char* name, auto get) {
    os << name;
    for (const auto& r : reports) os << ',' << fmt_double(get(r));
    os << '\n';
  };
  row("mean", [](const AblationReport& r) { return r.mean; });
  row("median", [](const AblationReport& r) { return r.median; });
  row("variance", [](const AblationReport& r) { return r.variance; });
  row("failures", [](const AblationReport& r) { return static_cast<double>(r.failures); });
}

}  // namespace maxent
