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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "maxent/tensor.hpp"

namespace maxent {

// Affine value map y = scale * x + offset, kept so normalization can be undone.
struct AffineMap {
  double scale = 1.0;
  double offset = 0.0;

  double apply(double x) const { return scale * x + offset; }
  double invert(double y) const { return (y - offset) / scale; }
};

struct LabeledDataset {
  Shape sample_shape;
  std::vector<Tensor> instances;
  std::vector<std::size_t> labels;
  std::size_t class_count = 0;
  ValueRange value_range;
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
  // Map from the raw (ingested) values to the current ones.
  AffineMap normalization;

  std::size_t size() const { return instances.size(); }
};

// Per-feature relevance mask; 1 marks a feature the label depends on.
struct GroundTruthMask {
  std::vector<int> mask;

  std::size_t relevant_count() const {
    return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1));
  }
};

struct ToySpec {
  std::size_t features = 2;  // f
  std::size_t relevant = 1;  // k
  std::size_t classes = 2;   // c
  std::size_t domain = 2;    // v
  std::size_t count = 10000; // n
  std::uint64_t seed = 0;
};

inline void validate(const ToySpec& s) {
  if (s.relevant < 1 || s.relevant > s.features) {
    throw SpecError("toy spec requires 1 <= k <= f");
  }
  if (s.classes < 2) throw SpecError("toy spec requires c >= 2");
  if (s.domain < 2) throw SpecError("toy spec requires v >= 2");
  if (s.count < 1) throw SpecError("toy spec requires n >= 1");
  double combos = std::pow(static_cast<double>(s.domain), static_cast<double>(s.relevant));
  if (static_cast<double>(s.classes) > combos) {
    throw SpecError("c > v^k: the label function cannot realize every class");
  }
}

// Label = (sum of the k relevant features) mod c; relevant features lead.
inline std::size_t toy_label(const ToySpec& s, std::span<const double> x) {
  std::size_t sum = 0;
  for (std::size_t i = 0; i < s.relevant; ++i) sum += static_cast<std::size_t>(x[i]);
  return sum % s.classes;
}

inline GroundTruthMask toy_mask(const ToySpec& s) {
  GroundTruthMask m;
  m.mask.assign(s.features, 0);
  for (std::size_t i = 0; i < s.relevant; ++i) m.mask[i] = 1;
  return m;
}

// First floor(0.8 n) instances train, the rest test (at least one train row).
inline void split_80_20(LabeledDataset& ds) {
  std::size_t n = ds.size();
  std::size_t n_train = std::max<std::size_t>(1, n * 4 / 5);
  n_train = std::min(n_train, n);
  ds.train_indices.resize(n_train);
  std::iota(ds.train_indices.begin(), ds.train_indices.end(), 0);
  ds.test_indices.resize(n - n_train);
  std::iota(ds.test_indices.begin(), ds.test_indices.end(), n_train);
}

inline std::pair<LabeledDataset, GroundTruthMask> toy_generate(const ToySpec& spec) {
  validate(spec);
  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<std::size_t> pick(0, spec.domain - 1);
  LabeledDataset ds;
  ds.sample_shape = {spec.features};
  ds.class_count = spec.classes;
  ds.value_range = {0.0, static_cast<double>(spec.domain - 1)};
  ds.instances.reserve(spec.count);
  ds.labels.reserve(spec.count);
  for (std::size_t n = 0; n < spec.count; ++n) {
    Tensor x({spec.features});
    for (double& v : x) v = static_cast<double>(pick(rng));
    ds.labels.push_back(toy_label(spec, x.values()));
    ds.instances.push_back(std::move(x));
  }
  split_80_20(ds);
  return {std::move(ds), toy_mask(spec)};
}

// Every point of {0..v-1}^f, in lexicographic order.
inline std::vector<Tensor> toy_all_instances(const ToySpec& spec) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < spec.features; ++i) total *= spec.domain;
  std::vector<Tensor> out;
  out.reserve(total);
  for (std::size_t code = 0; code < total; ++code) {
    Tensor x({spec.features});
    std::size_t rest = code;
    for (std::size_t i = spec.features; i-- > 0;) {
      x[i] = static_cast<double>(rest % spec.domain);
      rest /= spec.domain;
    }
    out.push_back(std::move(x));
  }
  return out;
}

inline AffineMap affine_between(const ValueRange& from, const ValueRange& to) {
  if (!(from.hi > from.lo)) throw DataError("degenerate source value range");
  double scale = (to.hi - to.lo) / (from.hi - from.lo);
  return {scale, to.lo - scale * from.lo};
}

inline LabeledDataset normalize(LabeledDataset ds, const ValueRange& target) {
  AffineMap m = affine_between(ds.value_range, target);
  if (m.scale != 1.0 || m.offset != 0.0) {
    for (Tensor& x : ds.instances) {
      for (double& v : x) v = target.clip(m.apply(v));
    }
  }
  ds.normalization = {ds.normalization.scale * m.scale,
                      m.scale * ds.normalization.offset + m.offset};
  ds.value_range = target;
  return ds;
}

inline Tensor denormalize(const LabeledDataset& ds, const Tensor& x) {
  Tensor out = x;
  for (double& v : out) v = ds.normalization.invert(v);
  return out;
}

inline void write_csv(std::ostream& os, const LabeledDataset& ds) {
  std::size_t width = shape_size(ds.sample_shape);
  for (std::size_t i = 0; i < width; ++i) os << 'f' << i << ',';
  os << "label\n";
  os.precision(17);
  for (std::size_t n = 0; n < ds.size(); ++n) {
    for (double v : ds.instances[n]) os << v << ',';
    os << ds.labels[n] << '\n';
  }
}

// ---------------------------------------------------------------------------
// Procedural seven-segment digits: a small stand-in for handwritten digit
// images with the same [0,255] byte encoding.

struct GlyphSpec {
  std::size_t count = 6000;
  std::size_t side = 14;
  std::uint64_t seed = 0;
};

namespace detail {

// Segment order: top, top-right, bottom-right, bottom, bottom-left, top-left,
// middle.
inline constexpr std::array<std::uint8_t, 10> kSevenSegment = {
    0b0111111, 0b0000110, 0b1011011, 0b1001111, 0b1100110,
    0b1101101, 0b1111101, 0b0000111, 0b1111111, 0b1101111};

inline double segment_distance(double px, double py, double ax, double ay, double bx,
                               double by) {
  double vx = bx - ax, vy = by - ay;
  double len2 = vx * vx + vy * vy;
  double t = len2 > 0 ? std::clamp(((px - ax) * vx + (py - ay) * vy) / len2, 0.0, 1.0)
                      : 0.0;
  double dx = px - (ax + t * vx), dy = py - (ay + t * vy);
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace detail

inline std::vector<std::uint8_t> render_glyph(std::size_t digit, std::size_t side,
                                              std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double s = static_cast<double>(side);
  double w = s * (0.28 + 0.12 * unit(rng));
  double h = s * (0.55 + 0.12 * unit(rng));
  double cx = s / 2 + (unit(rng) - 0.5) * s * 0.18;
  double cy = s / 2 + (unit(rng) - 0.5) * s * 0.14;
  double slant = (unit(rng) - 0.5) * 0.5;
  double half_stroke = s * (0.045 + 0.035 * unit(rng));
  double ink = 170.0 + 85.0 * unit(rng);
  double noise = 25.0 * unit(rng);

  // Corner points of the digit box; x is shifted by slant * (distance above centre).
  auto pt = [&](double fx, double fy) {
    double y = cy + (fy - 0.5) * h;
    double x = cx + (fx - 0.5) * w + slant * (cy - y);
    return std::array<double, 2>{x, y};
  };
  const std::array<std::array<double, 2>, 6> p = {pt(0, 0), pt(1, 0), pt(1, 0.5),
                                                  pt(1, 1), pt(0, 1), pt(0, 0.5)};
  // (from, to) indices into p for each of the seven segments.
  constexpr std::array<std::array<int, 2>, 7> seg = {
      {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}, {5, 2}}};
  const std::uint8_t on = detail::kSevenSegment[digit];

  std::vector<std::uint8_t> img(side * side);
  for (std::size_t r = 0; r < side; ++r) {
    for (std::size_t c = 0; c < side; ++c) {
      double px = c + 0.5, py = r + 0.5;
      double d = 1e9;
      for (std::size_t k = 0; k < 7; ++k) {
        if (!(on >> k & 1)) continue;
        const auto& a = p[seg[k][0]];
        const auto& b = p[seg[k][1]];
        d = std::min(d, detail::segment_distance(px, py, a[0], a[1], b[0], b[1]));
      }
      double cover = std::clamp(half_stroke + 0.5 - d, 0.0, 1.0);
      double v = ink * cover + noise * unit(rng);
      img[r * side + c] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
  }
  return img;
}

// Balanced 10-class glyph images in raw [0,255] values, 80/20 split.
inline LabeledDataset glyph_generate(const GlyphSpec& spec) {
  if (spec.side < 8) throw SpecError("glyph side must be at least 8");
  std::mt19937_64 rng(spec.seed);
  LabeledDataset ds;
  ds.sample_shape = {1, spec.side, spec.side};
  ds.class_count = 10;
  ds.value_range = {0.0, 255.0};
  for (std::size_t n = 0; n < spec.count; ++n) {
    std::size_t digit = n % 10;
    auto img = render_glyph(digit, spec.side, rng);
    Tensor x(ds.sample_shape);
    for (std::size_t i = 0; i < img.size(); ++i) x[i] = img[i];
    ds.instances.push_back(std::move(x));
    ds.labels.push_back(digit);
  }
  split_80_20(ds);
  return ds;
}

}  // namespace maxent
