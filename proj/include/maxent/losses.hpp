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
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "maxent/attribution.hpp"
#include "maxent/data.hpp"

namespace maxent {

// KL(q || p) with q uniform over the mask's ones and p the normalized
// |attribution| + eps.
inline double kl_loss(const Tensor& attr, const GroundTruthMask& mask,
                      double eps = 1e-8) {
  if (mask.mask.size() != attr.size()) {
    throw DimensionError("kl_loss: mask length does not match attribution size");
  }
  const std::size_t k = mask.relevant_count();
  if (k == 0) throw SpecError("kl_loss: ground-truth mask has no relevant feature");
  double z = 0.0;
  for (double v : attr) z += std::abs(v) + eps;
  const double q = 1.0 / static_cast<double>(k);
  double kl = 0.0;
  for (std::size_t i = 0; i < attr.size(); ++i) {
    if (!mask.mask[i]) continue;
    double p = (std::abs(attr[i]) + eps) / z;
    kl += q * std::log(q / p);
  }
  return kl;
}

inline double kl_loss(const AttributionMap& attr, const GroundTruthMask& mask,
                      double eps = 1e-8) {
  return kl_loss(attr.values, mask, eps);
}

// 1-based ranks; tied values share their average rank.
inline std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = r;
    i = j + 1;
  }
  return ranks;
}

struct SpearmanResult {
  double rho = 0.0;
  bool degenerate = false;  // one input has zero rank variance
};

inline SpearmanResult spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("spearman: length mismatch");
  auto ra = average_ranks(a), rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return {0.0, true};
  return {sab / std::sqrt(saa * sbb), false};
}

// 1 - rho; a constant map is uninformative and scores 1.
inline double spearman_loss(const Tensor& a, const Tensor& b) {
  a.check_same(b);
  SpearmanResult r = spearman(a.values(), b.values());
  return r.degenerate ? 1.0 : 1.0 - r.rho;
}

inline double spearman_loss(const AttributionMap& a, const AttributionMap& b) {
  return spearman_loss(a.values, b.values);
}

}  // namespace maxent
