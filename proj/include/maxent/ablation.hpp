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

// Ablation tests. Positively attributed features are replaced by a substitute
// and the change of a surveillance target is recorded:
//   classic: logit or softmax probability of the predicted class must drop;
//   entropy: substitutes come from the maximum-entropy baseline and the score
//            is the entropy increase H(ablated) - H(original).

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "maxent/attribution.hpp"
#include "maxent/baselines.hpp"
#include "maxent/entropy.hpp"

namespace maxent {

enum class AblationTarget { kLogit, kSoftmax, kEntropy };
enum class SubstituteKind { kZero, kInstanceMin, kSignFlip, kBlur, kFixed };

struct AblationConfig {
  SubstituteKind substitute = SubstituteKind::kZero;
  AblationTarget target = AblationTarget::kLogit;
  // Fraction of all features to ablate (capped at the positive ones);
  // unset ablates every positively attributed feature.
  std::optional<double> fraction;
  std::optional<Tensor> fixed;  // for SubstituteKind::kFixed
  double blur_sigma = 2.0;
  std::size_t blur_kernel = 5;
};

struct AblationOutcome {
  double score = 0.0;
  std::size_t ablated = 0;
  bool no_positive = false;
};

// Indices of positively attributed features in descending attribution order,
// truncated to ceil(fraction * n) when a fraction is given.
inline std::vector<std::size_t> positive_features(const Tensor& attr,
                                                  std::optional<double> fraction) {
  if (fraction && !(*fraction > 0.0 && *fraction <= 1.0)) {
    throw SpecError("ablation fraction must lie in (0, 1]");
  }
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < attr.size(); ++i) {
    if (attr[i] > 0.0) idx.push_back(i);
  }
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return attr[a] > attr[b]; });
  if (fraction) {
    auto cap = static_cast<std::size_t>(
        std::ceil(*fraction * static_cast<double>(attr.size()) - 1e-9));
    if (idx.size() > cap) idx.resize(cap);
  }
  return idx;
}

inline Tensor ablate(const Tensor& x, const Tensor& substitute,
                     const std::vector<std::size_t>& features) {
  x.check_same(substitute);
  Tensor out = x;
  for (std::size_t i : features) out[i] = substitute[i];
  return out;
}

inline Tensor classic_substitute(const Tensor& x, const AblationConfig& cfg) {
  switch (cfg.substitute) {
    case SubstituteKind::kZero: return Tensor(x.shape(), 0.0);
    case SubstituteKind::kInstanceMin: return Tensor(x.shape(), x.min());
    case SubstituteKind::kSignFlip: return x * -1.0;
    case SubstituteKind::kBlur: return gaussian_blur(x, cfg.blur_sigma, cfg.blur_kernel);
    case SubstituteKind::kFixed:
      if (!cfg.fixed) throw SpecError("fixed substitute requested without a tensor");
      x.check_same(*cfg.fixed);
      return *cfg.fixed;
  }
  throw SpecError("unknown substitute kind");
}

inline double surveillance_value(const Network& net, const Tensor& x, std::size_t cls,
                                 AblationTarget target) {
  Tensor logits = net.forward(x);
  switch (target) {
    case AblationTarget::kLogit: return logits[cls];
    case AblationTarget::kSoftmax: return softmax(logits.values())[cls];
    case AblationTarget::kEntropy: return softmax_entropy(logits.values());
  }
  return 0.0;
}

// target(x) - target(x_ablated) for the class predicted at x.
inline AblationOutcome classic_ablation(const Network& net, const Tensor& x,
                                        const AttributionMap& attr,
                                        const AblationConfig& cfg) {
  if (cfg.target == AblationTarget::kEntropy) {
    throw SpecError("classic ablation cannot target entropy; use entropy_ablation");
  }
  x.check_same(attr.values);
  auto features = positive_features(attr.values, cfg.fraction);
  if (features.empty()) return {0.0, 0, true};
  const std::size_t cls = predict(net, x);
  Tensor ablated = ablate(x, classic_substitute(x, cfg), features);
  double score = surveillance_value(net, x, cls, cfg.target) -
                 surveillance_value(net, ablated, cls, cfg.target);
  return {score, features.size(), false};
}

// H(softmax(f(x_ablated))) - H(softmax(f(x))) with substitutes taken from the
// maximum-entropy baseline at the same coordinates.
inline AblationOutcome entropy_ablation(const Network& net, const Tensor& x,
                                        const AttributionMap& attr,
                                        const Tensor& max_entropy_baseline,
                                        std::optional<double> fraction = std::nullopt) {
  x.check_same(attr.values);
  auto features = positive_features(attr.values, fraction);
  if (features.empty()) return {0.0, 0, true};
  Tensor ablated = ablate(x, max_entropy_baseline, features);
  double score = logits_entropy(net, ablated) - logits_entropy(net, x);
  return {score, features.size(), false};
}

inline constexpr std::array<double, 9> kFractionSweep = {0.1, 0.2, 0.3, 0.4, 0.5,
                                                         0.6, 0.7, 0.8, 0.9};

// Mean entropy-ablation score over the fraction sweep (area under the curve
// on a unit-spaced grid).
inline AblationOutcome entropy_ablation_auc(const Network& net, const Tensor& x,
                                            const AttributionMap& attr,
                                            const Tensor& max_entropy_baseline) {
  AblationOutcome total{0.0, 0, true};
  for (double p : kFractionSweep) {
    AblationOutcome o = entropy_ablation(net, x, attr, max_entropy_baseline, p);
    total.score += o.score;
    total.ablated = std::max(total.ablated, o.ablated);
    total.no_positive = total.no_positive && o.no_positive;
  }
  total.score /= static_cast<double>(kFractionSweep.size());
  return total;
}

struct AblationReport {
  std::string method_tag;
  std::string baseline_tag;
  std::vector<double> scores;
  std::size_t no_positive = 0;
  std::size_t failures = 0;
  std::string error;  // first failure message, if any
  double mean = 0.0;
  double median = 0.0;
  double variance = 0.0;  // population variance
};

inline double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline void summarize(AblationReport& r) {
  const auto& s = r.scores;
  if (s.empty()) {
    r.mean = r.median = r.variance = 0.0;
    return;
  }
  const double n = static_cast<double>(s.size());
  r.mean = std::accumulate(s.begin(), s.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : s) ss += (v - r.mean) * (v - r.mean);
  r.variance = ss / n;
  r.median = median_of(s);
}

// Enforces H(B) >= H(x) - eps over the given inputs. Each violator seeds a
// fresh ascent; the better result replaces the cached baseline. Returns the
// number of repairs performed.
inline std::size_t ensure_conservation(const Network& net, BaselineBuilder& builder,
                                       const std::vector<Tensor>& inputs,
                                       double eps = 1e-3) {
  std::size_t repairs = 0;
  for (const Tensor& x : inputs) {
    const FullSearchResult& current = builder.max_entropy_full_result();
    if (logits_entropy(net, x) <= current.entropy + eps) continue;
    FullSearchResult warm =
        max_entropy_full(net, x, builder.range(), builder.params().ascent);
    ++repairs;
    if (warm.entropy > current.entropy) builder.set_max_entropy_full(std::move(warm));
    if (logits_entropy(net, x) > builder.max_entropy_full_result().entropy + eps) {
      throw NumericError("conservation repair failed: warm-started ascent did not "
                         "reach the entropy of the violating input");
    }
  }
  return repairs;
}

}  // namespace maxent
