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

// Gradient-family explainers. Every map explains the raw logit of one class.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "maxent/baselines.hpp"
#include "maxent/nn.hpp"

namespace maxent {

struct AttributionMap {
  Tensor values;
  std::size_t class_explained = 0;
  std::string method_tag;
  std::optional<std::string> baseline_tag;

  std::string tag() const {
    return baseline_tag ? method_tag + "_" + *baseline_tag : method_tag;
  }
};

// Midpoint Riemann sum of the path integral from baseline to x:
//   (x - x') * (1/m) * sum_i grad f_c(x' + (i - 1/2)/m * (x - x')).
inline AttributionMap integrated_gradients(const Network& net, const Tensor& x,
                                           const Tensor& baseline, std::size_t cls,
                                           std::size_t steps = 100) {
  if (baseline.shape() != x.shape()) {
    throw DimensionError("baseline shape " + shape_string(baseline.shape()) +
                         " does not match input " + shape_string(x.shape()));
  }
  if (steps < 1) throw SpecError("integrated_gradients needs steps >= 1");
  net.check_input(x);
  net.check_class(cls);
  const Tensor delta = x - baseline;
  Tensor total(x.shape());
  Tensor point(x.shape());
  for (std::size_t i = 1; i <= steps; ++i) {
    const double alpha = (static_cast<double>(i) - 0.5) / static_cast<double>(steps);
    for (std::size_t j = 0; j < x.size(); ++j) point[j] = baseline[j] + alpha * delta[j];
    total += input_gradient(net, point, cls);
  }
  if (!total.all_finite()) throw NumericError("integrated_gradients: non-finite gradient");
  AttributionMap out{hadamard(delta, total * (1.0 / static_cast<double>(steps))), cls,
                     "ig", std::nullopt};
  return out;
}

inline AttributionMap integrated_gradients(const Network& net, const Tensor& x,
                                           const BaselineSpec& baseline, std::size_t cls,
                                           std::size_t steps = 100) {
  AttributionMap m = integrated_gradients(net, x, baseline.materialized, cls, steps);
  m.baseline_tag = baseline.tag();
  return m;
}

inline AttributionMap vanilla_gradient(const Network& net, const Tensor& x,
                                       std::size_t cls) {
  return {input_gradient(net, x, cls), cls, "vanilla", std::nullopt};
}

inline AttributionMap gradient_x_input(const Network& net, const Tensor& x,
                                       std::size_t cls) {
  return {hadamard(x, input_gradient(net, x, cls)), cls, "grad_x_input", std::nullopt};
}

inline AttributionMap guided_backprop(const Network& net, const Tensor& x,
                                      std::size_t cls) {
  return {guided_input_gradient(net, x, cls), cls, "guided", std::nullopt};
}

struct SmoothGradOptions {
  std::size_t samples = 50;
  double noise = 0.15;  // standard deviation as a fraction of the range width
  std::uint64_t seed = 0;
};

namespace detail {

template <class GradFn>
Tensor smoothed(const Tensor& x, const ValueRange& range, const SmoothGradOptions& opt,
                GradFn&& grad) {
  if (opt.samples < 1) throw SpecError("smoothgrad needs at least one sample");
  const double sd = opt.noise * range.width();
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  Tensor total(x.shape());
  Tensor noisy(x.shape());
  for (std::size_t s = 0; s < opt.samples; ++s) {
    for (std::size_t j = 0; j < x.size(); ++j) noisy[j] = x[j] + sd * dist(rng);
    total += grad(noisy);
  }
  return total * (1.0 / static_cast<double>(opt.samples));
}

}  // namespace detail

// Mean vanilla gradient over Gaussian perturbations of x.
inline AttributionMap smoothgrad(const Network& net, const Tensor& x, std::size_t cls,
                                 const ValueRange& range,
                                 const SmoothGradOptions& opt = {}) {
  net.check_class(cls);
  Tensor v = detail::smoothed(x, range, opt,
                              [&](const Tensor& p) { return input_gradient(net, p, cls); });
  return {std::move(v), cls, "smoothgrad", std::nullopt};
}

inline AttributionMap guided_backprop_sg(const Network& net, const Tensor& x,
                                         std::size_t cls, const ValueRange& range,
                                         const SmoothGradOptions& opt = {}) {
  net.check_class(cls);
  Tensor v = detail::smoothed(x, range, opt, [&](const Tensor& p) {
    return guided_input_gradient(net, p, cls);
  });
  return {std::move(v), cls, "guided_sg", std::nullopt};
}

// Comparison reference: i.i.d. uniform [-1, 1] scores.
inline AttributionMap random_saliency(const Shape& shape, std::size_t cls,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Tensor v(shape);
  for (double& e : v) e = dist(rng);
  return {std::move(v), cls, "random", std::nullopt};
}

// ---------------------------------------------------------------------------
// Method catalogue, used by the hybrid explainer and the evaluation matrix.

enum class Method { kRandom, kVanilla, kGradInput, kGuided, kGuidedSmoothGrad,
                    kIntegratedGradients, kSmoothGrad };

struct MethodSpec {
  Method method = Method::kVanilla;
  BaselineKind baseline = BaselineKind::kZero;  // integrated gradients only

  std::string tag() const {
    switch (method) {
      case Method::kRandom: return "random";
      case Method::kVanilla: return "vanilla";
      case Method::kGradInput: return "grad_x_input";
      case Method::kGuided: return "guided";
      case Method::kGuidedSmoothGrad: return "guided_sg";
      case Method::kSmoothGrad: return "smoothgrad";
      case Method::kIntegratedGradients:
        return "ig_" + std::string(baseline_name(baseline));
    }
    return "?";
  }
  friend bool operator==(const MethodSpec&, const MethodSpec&) = default;
};

inline MethodSpec parse_method(std::string_view name) {
  if (name.starts_with("ig_")) {
    return {Method::kIntegratedGradients, parse_baseline(name.substr(3))};
  }
  for (Method m : {Method::kRandom, Method::kVanilla, Method::kGradInput,
                   Method::kGuided, Method::kGuidedSmoothGrad, Method::kSmoothGrad}) {
    MethodSpec s{m, BaselineKind::kZero};
    if (s.tag() == name) return s;
  }
  throw SpecError("unknown method '" + std::string(name) + "'");
}

struct ExplainOptions {
  std::size_t ig_steps = 100;
  SmoothGradOptions smoothgrad;
};

// Binds a network, its baseline builder and explainer options. Thread-safe
// once the builder has been prepared.
class Explainer {
 public:
  Explainer(const Network& net, const BaselineBuilder& baselines, ExplainOptions opt = {})
      : net_(&net), baselines_(&baselines), opt_(opt) {}

  const Network& network() const { return *net_; }
  const BaselineBuilder& baselines() const { return *baselines_; }
  const ExplainOptions& options() const { return opt_; }

  // seed drives random maps, noise baselines and SmoothGrad perturbations.
  AttributionMap explain(const MethodSpec& spec, const Tensor& x, std::size_t cls,
                         std::uint64_t seed) const {
    const ValueRange& range = baselines_->range();
    SmoothGradOptions sg = opt_.smoothgrad;
    sg.seed = seed;
    switch (spec.method) {
      case Method::kRandom: return random_saliency(x.shape(), cls, seed);
      case Method::kVanilla: return vanilla_gradient(*net_, x, cls);
      case Method::kGradInput: return gradient_x_input(*net_, x, cls);
      case Method::kGuided: return guided_backprop(*net_, x, cls);
      case Method::kGuidedSmoothGrad: return guided_backprop_sg(*net_, x, cls, range, sg);
      case Method::kSmoothGrad: return smoothgrad(*net_, x, cls, range, sg);
      case Method::kIntegratedGradients: {
        BaselineSpec b = baselines_->build(spec.baseline, x, seed);
        return integrated_gradients(*net_, x, b, cls, opt_.ig_steps);
      }
    }
    throw SpecError("unknown method");
  }

 private:
  const Network* net_;
  const BaselineBuilder* baselines_;
  ExplainOptions opt_;
};

// ---------------------------------------------------------------------------
// Hybrid (voting) explainer.

struct HybridWeights {
  std::vector<double> weights;
  // Set when every score was non-positive and uniform weights were used.
  bool uniform_fallback = false;
};

// Clips scores at zero and normalizes them to sum 1.
inline HybridWeights hybrid_weights_from_scores(const std::vector<double>& scores) {
  if (scores.empty()) throw SpecError("hybrid weights need at least one method");
  HybridWeights w;
  w.weights.resize(scores.size());
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    w.weights[i] = std::max(0.0, scores[i]);
    total += w.weights[i];
  }
  if (!(total > 0.0)) {
    std::fill(w.weights.begin(), w.weights.end(), 1.0 / static_cast<double>(scores.size()));
    w.uniform_fallback = true;
    return w;
  }
  for (double& v : w.weights) v /= total;
  return w;
}

// Rescales a map to unit max-absolute value (all-zero maps stay zero).
inline Tensor unit_max_abs(const Tensor& t) {
  double m = max_abs(t);
  return m > 0.0 ? t * (1.0 / m) : t;
}

// Weighted vote of unit-max-abs normalized maps.
inline AttributionMap hybrid_combine(const std::vector<AttributionMap>& maps,
                                     const HybridWeights& weights) {
  if (maps.empty()) throw SpecError("hybrid explainer needs at least one method");
  if (weights.weights.size() != maps.size()) {
    throw SpecError("hybrid weights length does not match method count");
  }
  Tensor total(maps.front().values.shape());
  for (std::size_t i = 0; i < maps.size(); ++i) {
    total += unit_max_abs(maps[i].values) * weights.weights[i];
  }
  return {std::move(total), maps.front().class_explained, "hybrid", std::nullopt};
}

inline AttributionMap hybrid_explain(const Explainer& explainer, const Tensor& x,
                                     std::size_t cls, const std::vector<MethodSpec>& methods,
                                     const HybridWeights& weights, std::uint64_t seed) {
  if (methods.empty()) throw SpecError("hybrid explainer needs at least one method");
  if (weights.weights.size() != methods.size()) {
    throw SpecError("hybrid weights length does not match method count");
  }
  std::vector<AttributionMap> maps;
  maps.reserve(methods.size());
  for (const MethodSpec& m : methods) maps.push_back(explainer.explain(m, x, cls, seed));
  return hybrid_combine(maps, weights);
}

}  // namespace maxent
