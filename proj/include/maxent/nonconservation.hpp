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

// Searches the valid input box for inputs that carry less "information" than
// an ablation substitute. For logit and softmax targets the information is the
// class score (lower is less); for the entropy target it is the inverse
// entropy, so the search maximizes H.

#include <optional>
#include <string>
#include <vector>

#include "maxent/ablation.hpp"
#include "maxent/entropy.hpp"

namespace maxent {

struct NamedInput {
  std::string name;
  Tensor input;
};

struct NonconservationOptions {
  AblationTarget target = AblationTarget::kLogit;
  std::size_t cls = 0;  // ignored for the entropy target
  std::size_t steps = 1000;
  std::optional<double> learning_rate;  // unset: 0.01 * range width
  std::optional<Tensor> start;          // unset: midpoint constant input
};

struct SubstituteMarker {
  std::string name;
  double value = 0.0;
  // Information left in the substitute beyond the best input found:
  // value - min_found for score targets, max_found - value for entropy.
  double residue = 0.0;
};

struct NonconservationResult {
  AblationTarget target = AblationTarget::kLogit;
  std::vector<double> trajectory;  // surveillance value per iterate
  Tensor best_input;
  double best_value = 0.0;  // min score, or max entropy
  std::vector<SubstituteMarker> markers;
};

namespace detail {

// Value of the surveillance target and the gradient of the minimized objective.
inline double target_and_descent_gradient(const Network& net, const Tensor& x,
                                          AblationTarget target, std::size_t cls,
                                          Tensor& grad) {
  auto t = net.trace(x);
  const std::vector<double>& logits = t.acts.back();
  std::vector<double> up(logits.size(), 0.0);
  double value = 0.0;
  switch (target) {
    case AblationTarget::kLogit:
      value = logits[cls];
      up[cls] = 1.0;
      break;
    case AblationTarget::kSoftmax: {
      auto p = softmax(logits);
      value = p[cls];
      for (std::size_t j = 0; j < p.size(); ++j) up[j] = p[cls] * ((j == cls) - p[j]);
      break;
    }
    case AblationTarget::kEntropy: {
      up = softmax_entropy_gradient(logits, &value);
      for (double& u : up) u = -u;
      break;
    }
  }
  grad = net.backward(t, up);
  return value;
}

}  // namespace detail

inline NonconservationResult nonconservation_demo(
    const Network& net, const ValueRange& range, const NonconservationOptions& opt,
    const std::vector<NamedInput>& substitutes = {}) {
  const bool entropy = opt.target == AblationTarget::kEntropy;
  if (!entropy) net.check_class(opt.cls);
  const double lr = opt.learning_rate.value_or(0.01 * range.width());
  Tensor x = opt.start ? *opt.start : Tensor(net.input_shape(), range.mid());
  net.check_input(x);
  clip_into(x, range);

  NonconservationResult r;
  r.target = opt.target;
  r.trajectory.reserve(opt.steps + 1);
  Tensor grad;
  for (std::size_t s = 0;; ++s) {
    double v = detail::target_and_descent_gradient(net, x, opt.target, opt.cls, grad);
    if (!std::isfinite(v) || !grad.all_finite()) {
      throw NumericError("descent: non-finite gradient at step " + std::to_string(s));
    }
    r.trajectory.push_back(v);
    bool better = r.trajectory.size() == 1 || (entropy ? v > r.best_value : v < r.best_value);
    if (better) {
      r.best_value = v;
      r.best_input = x;
    }
    if (s == opt.steps) break;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = range.clip(x[i] - lr * grad[i]);
  }
  for (const NamedInput& sub : substitutes) {
    double v = surveillance_value(net, sub.input, opt.cls, opt.target);
    r.markers.push_back({sub.name, v, entropy ? r.best_value - v : v - r.best_value});
  }
  return r;
}

}  // namespace maxent
