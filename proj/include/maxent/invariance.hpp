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

// Input-shift invariance. Inputs are shifted by s and the first layer's bias
// absorbs it (b' = b - W s), so the shifted model on shifted inputs computes
// the same logits as the original.

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "maxent/attribution.hpp"

namespace maxent {

enum class ShiftShape { kUniform, kCross };

struct ShiftSpec {
  ShiftShape shape = ShiftShape::kUniform;
  double amplitude = 0.5;
};

inline std::string_view shift_name(ShiftShape s) {
  return s == ShiftShape::kUniform ? "uniform" : "cross";
}

// Cross mask: for CHW inputs, a horizontal and a vertical band through the
// image centre (band width max(1, side / 7)); for flat inputs, the first half.
inline Tensor shift_tensor(const ShiftSpec& spec, const Shape& shape) {
  Tensor s(shape, 0.0);
  if (spec.shape == ShiftShape::kUniform) {
    for (double& v : s) v = spec.amplitude;
    return s;
  }
  if (shape.size() == 3) {
    const std::size_t ch = shape[0], h = shape[1], w = shape[2];
    const std::size_t bh = std::max<std::size_t>(1, h / 7);
    const std::size_t bw = std::max<std::size_t>(1, w / 7);
    const std::size_t r0 = (h - bh) / 2, c0 = (w - bw) / 2;
    for (std::size_t c = 0; c < ch; ++c) {
      for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t q = 0; q < w; ++q) {
          bool in_row = r >= r0 && r < r0 + bh;
          bool in_col = q >= c0 && q < c0 + bw;
          if (in_row || in_col) s[(c * h + r) * w + q] = spec.amplitude;
        }
      }
    }
    return s;
  }
  for (std::size_t i = 0; i < s.size() / 2; ++i) s[i] = spec.amplitude;
  return s;
}

inline bool is_constant(const Tensor& t) {
  return std::all_of(t.begin(), t.end(), [&](double v) { return v == t[0]; });
}

// Network' with f'(x + shift) == f(x). The first parametrized layer may be
// preceded by Flatten only. A convolution can absorb uniform shifts only.
inline Network absorb_input_shift(const Network& net, const Tensor& shift) {
  net.check_input(shift);
  Network out = net;
  for (Layer& layer : out.mutable_layers()) {
    if (std::holds_alternative<Flatten>(layer)) continue;
    if (auto* d = std::get_if<Dense>(&layer)) {
      for (std::size_t o = 0; o < d->out; ++o) {
        double ws = 0.0;
        for (std::size_t i = 0; i < d->in; ++i) ws += d->weight[o * d->in + i] * shift[i];
        d->bias[o] -= ws;
      }
      return out;
    }
    if (auto* c = std::get_if<Conv2D>(&layer)) {
      if (!is_constant(shift)) {
        throw UnsupportedError("a convolutional first layer absorbs only uniform shifts");
      }
      const std::size_t per_out = c->in_channels * c->kernel_h * c->kernel_w;
      for (std::size_t o = 0; o < c->out_channels; ++o) {
        double ksum = 0.0;
        for (std::size_t i = 0; i < per_out; ++i) ksum += c->weight[o * per_out + i];
        c->bias[o] -= ksum * shift[0];
      }
      return out;
    }
    break;
  }
  throw SpecError("first layer must be Dense or Conv2D to absorb an input shift");
}

enum class BaselinePolicy {
  kHold,            // baseline unchanged
  kShiftWithInput,  // baseline + amplitude, the uniform shift a constant baseline sees
  kShiftByMask,     // baseline + the exact input shift tensor
};

inline std::string_view policy_name(BaselinePolicy p) {
  switch (p) {
    case BaselinePolicy::kHold: return "hold";
    case BaselinePolicy::kShiftWithInput: return "shift-with-input";
    case BaselinePolicy::kShiftByMask: return "shift-by-mask";
  }
  return "?";
}

struct InvarianceReport {
  ShiftSpec shift;
  BaselinePolicy policy = BaselinePolicy::kHold;
  double max_attribution_diff = 0.0;
  double max_logit_diff = 0.0;
  std::size_t instances = 0;
  double tolerance = 1e-6;

  bool invariant() const { return max_attribution_diff < tolerance; }
};

inline InvarianceReport linear_transform_test(const Network& net,
                                              const std::vector<Tensor>& instances,
                                              const ShiftSpec& shift, BaselinePolicy policy,
                                              const Tensor& baseline,
                                              std::size_t ig_steps = 100) {
  const Tensor s = shift_tensor(shift, net.input_shape());
  const Network shifted = absorb_input_shift(net, s);
  Tensor shifted_baseline = baseline;
  if (policy == BaselinePolicy::kShiftWithInput) {
    for (double& v : shifted_baseline) v += shift.amplitude;
  } else if (policy == BaselinePolicy::kShiftByMask) {
    shifted_baseline += s;
  }
  InvarianceReport r{shift, policy, 0.0, 0.0, instances.size(), 1e-6};
  for (const Tensor& x : instances) {
    const Tensor xs = x + s;
    r.max_logit_diff =
        std::max(r.max_logit_diff, max_abs_diff(net.forward(x), shifted.forward(xs)));
    const std::size_t cls = predict(net, x);
    AttributionMap a = integrated_gradients(net, x, baseline, cls, ig_steps);
    AttributionMap b = integrated_gradients(shifted, xs, shifted_baseline, cls, ig_steps);
    r.max_attribution_diff = std::max(r.max_attribution_diff, max_abs_diff(a.values, b.values));
  }
  return r;
}

}  // namespace maxent
