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

// Scalar baseline sweeps: IG is run from every constant baseline u * 1 on a
// grid over the value range and scored against a reference explanation.

#include <functional>
#include <variant>
#include <vector>

#include "maxent/attribution.hpp"
#include "maxent/baselines.hpp"
#include "maxent/losses.hpp"
#include "maxent/parallel.hpp"

namespace maxent {

struct SweepCurve {
  std::vector<double> inputs;
  std::vector<double> losses;

  // First minimum, i.e. the smallest u among ties.
  std::size_t argmin() const {
    return static_cast<std::size_t>(std::min_element(losses.begin(), losses.end()) -
                                    losses.begin());
  }
  double argmin_value() const { return inputs[argmin()]; }
};

using SweepReference = std::variant<GroundTruthMask, AttributionMap>;

inline std::vector<double> grid(const ValueRange& range, std::size_t n) {
  if (n < 2) throw SpecError("grid needs at least two points");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = range.lo + range.width() * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return g;
}

inline double reference_loss(const Tensor& attr, const SweepReference& ref) {
  return std::visit(Overloaded{[&](const GroundTruthMask& m) { return kl_loss(attr, m); },
                               [&](const AttributionMap& a) {
                                 return spearman_loss(attr, a.values);
                               }},
                    ref);
}

inline SweepCurve baseline_sweep(const Network& net, const Tensor& x, std::size_t cls,
                                 const SweepReference& reference,
                                 const ValueRange& range, std::size_t grid_n,
                                 std::size_t ig_steps = 100, std::size_t jobs = 1) {
  SweepCurve curve{grid(range, grid_n), std::vector<double>(grid_n)};
  parallel_for(grid_n, jobs, [&](std::size_t i) {
    Tensor base(x.shape(), curve.inputs[i]);
    AttributionMap m = integrated_gradients(net, x, base, cls, ig_steps);
    curve.losses[i] = reference_loss(m.values, reference);
  });
  return curve;
}

// Mean sweep loss over several inputs, each explained for its predicted class.
inline SweepCurve mean_baseline_sweep(const Network& net, const std::vector<Tensor>& xs,
                                      const SweepReference& reference,
                                      const ValueRange& range, std::size_t grid_n,
                                      std::size_t ig_steps = 100, std::size_t jobs = 1) {
  if (xs.empty()) throw SpecError("mean_baseline_sweep needs at least one input");
  SweepCurve total{grid(range, grid_n), std::vector<double>(grid_n, 0.0)};
  for (const Tensor& x : xs) {
    SweepCurve c = baseline_sweep(net, x, predict(net, x), reference, range, grid_n,
                                  ig_steps, jobs);
    for (std::size_t i = 0; i < grid_n; ++i) total.losses[i] += c.losses[i];
  }
  for (double& v : total.losses) v /= static_cast<double>(xs.size());
  return total;
}

struct MinLossHistogram {
  ValueRange range;
  std::vector<double> edges;          // bins + 1 edges
  std::vector<std::size_t> counts;    // bins
  std::vector<double> argmins;        // per instance
  double mode_center = 0.0;
  double entropy_argmax = 0.0;

  std::size_t mode_bin() const {
    return static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) -
                                    counts.begin());
  }
};

inline std::size_t bin_of(double v, const ValueRange& range, std::size_t bins) {
  double t = (v - range.lo) / range.width() * static_cast<double>(bins);
  auto b = static_cast<long>(std::floor(t));
  return static_cast<std::size_t>(std::clamp<long>(b, 0, static_cast<long>(bins) - 1));
}

// Per-instance sweep against reference_fn(x, cls); argmins binned over the
// range next to the entropy-curve maximum.
inline MinLossHistogram min_loss_histogram(
    const Network& net, const std::vector<Tensor>& instances,
    const std::function<SweepReference(const Tensor&, std::size_t)>& reference_fn,
    const ValueRange& range, std::size_t grid_n, std::size_t bins = 50,
    std::size_t ig_steps = 100, std::size_t jobs = 1) {
  if (bins < 1) throw SpecError("histogram needs at least one bin");
  MinLossHistogram h;
  h.range = range;
  h.edges = grid(range, bins + 1);
  h.counts.assign(bins, 0);
  h.argmins.resize(instances.size());
  parallel_for(instances.size(), jobs, [&](std::size_t n) {
    const Tensor& x = instances[n];
    std::size_t cls = predict(net, x);
    SweepCurve c = baseline_sweep(net, x, cls, reference_fn(x, cls), range, grid_n, ig_steps);
    h.argmins[n] = c.argmin_value();
  });
  for (double a : h.argmins) ++h.counts[bin_of(a, range, bins)];
  std::size_t mb = h.mode_bin();
  h.mode_center = 0.5 * (h.edges[mb] + h.edges[mb + 1]);
  EntropyCurve ec = entropy_curve(net, range, grid_n);
  h.entropy_argmax = ec.inputs[ec.argmax()];
  return h;
}

}  // namespace maxent
