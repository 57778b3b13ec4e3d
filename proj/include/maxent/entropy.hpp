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

#include <cmath>
#include <span>
#include <vector>

#include "maxent/nn.hpp"

namespace maxent {

inline std::vector<double> softmax(std::span<const double> logits) {
  double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double z = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) z += p[i] = std::exp(logits[i] - m);
  for (double& v : p) v /= z;
  return p;
}

// Shannon entropy in nats; 0 log 0 = 0.
inline double entropy(std::span<const double> p) {
  double total = 0.0;
  for (double v : p) {
    if (!std::isfinite(v)) throw NumericError("entropy: non-finite probability");
    if (v < 0.0) throw SpecError("entropy: negative probability");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) throw SpecError("entropy: probabilities do not sum to 1");
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

inline double softmax_entropy(std::span<const double> logits) {
  return entropy(softmax(logits));
}

// H(softmax(f(x))).
inline double logits_entropy(const Network& net, const Tensor& x) {
  return softmax_entropy(net.forward(x).values());
}

// dH/dz_j = -p_j (ln p_j + H) for H = H(softmax(z)).
inline std::vector<double> softmax_entropy_gradient(std::span<const double> logits,
                                                    double* h_out = nullptr) {
  auto p = softmax(logits);
  double h = 0.0;
  for (double v : p) {
    if (!std::isfinite(v)) throw NumericError("entropy gradient: non-finite logits");
    if (v > 0.0) h -= v * std::log(v);
  }
  std::vector<double> g(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) {
    g[j] = p[j] > 0.0 ? -p[j] * (std::log(p[j]) + h) : 0.0;
  }
  if (h_out) *h_out = h;
  return g;
}

// Value and input gradient of H(softmax(f(x))).
inline double logits_entropy_gradient(const Network& net, const Tensor& x, Tensor& grad) {
  auto t = net.trace(x);
  double h = 0.0;
  auto g = softmax_entropy_gradient(t.acts.back(), &h);
  grad = net.backward(t, g);
  return h;
}

}  // namespace maxent
