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

// Cross-product evaluation of explainers with an ablation test.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "maxent/ablation.hpp"
#include "maxent/attribution.hpp"
#include "maxent/parallel.hpp"

namespace maxent {

enum class Evaluator { kEntropy, kEntropyAuc, kClassicLogit, kClassicSoftmax };

inline std::string_view evaluator_name(Evaluator e) {
  switch (e) {
    case Evaluator::kEntropy: return "entropy";
    case Evaluator::kEntropyAuc: return "entropy_auc";
    case Evaluator::kClassicLogit: return "classic_logit";
    case Evaluator::kClassicSoftmax: return "classic_softmax";
  }
  return "?";
}

inline Evaluator parse_evaluator(std::string_view name) {
  for (Evaluator e : {Evaluator::kEntropy, Evaluator::kEntropyAuc,
                      Evaluator::kClassicLogit, Evaluator::kClassicSoftmax}) {
    if (evaluator_name(e) == name) return e;
  }
  throw SpecError("unknown evaluator '" + std::string(name) + "'");
}

struct MatrixOptions {
  Evaluator evaluator = Evaluator::kEntropy;
  std::optional<double> fraction;  // unset: every positive feature
  SubstituteKind classic_substitute = SubstituteKind::kZero;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
};

// SplitMix64 finalizer; derives independent per-instance seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Non-IG methods once each, IG once per baseline.
inline std::vector<MethodSpec> expand_cells(const std::vector<MethodSpec>& methods,
                                            const std::vector<BaselineKind>& baselines) {
  std::vector<MethodSpec> cells;
  for (const MethodSpec& m : methods) {
    if (m.method != Method::kIntegratedGradients) {
      cells.push_back(m);
      continue;
    }
    for (BaselineKind b : baselines) cells.push_back({Method::kIntegratedGradients, b});
  }
  return cells;
}

inline AblationOutcome score_instance(const Explainer& explainer, const MethodSpec& cell,
                                      const Tensor& x, std::uint64_t seed,
                                      const MatrixOptions& opt) {
  const Network& net = explainer.network();
  const std::size_t cls = predict(net, x);
  AttributionMap attr = explainer.explain(cell, x, cls, seed);
  switch (opt.evaluator) {
    case Evaluator::kEntropy:
      return entropy_ablation(net, x, attr,
                              explainer.baselines().max_entropy_full_result()
                                  .baseline.materialized,
                              opt.fraction);
    case Evaluator::kEntropyAuc:
      return entropy_ablation_auc(
          net, x, attr,
          explainer.baselines().max_entropy_full_result().baseline.materialized);
    case Evaluator::kClassicLogit:
    case Evaluator::kClassicSoftmax: {
      AblationConfig cfg;
      cfg.substitute = opt.classic_substitute;
      cfg.target = opt.evaluator == Evaluator::kClassicLogit ? AblationTarget::kLogit
                                                             : AblationTarget::kSoftmax;
      cfg.fraction = opt.fraction;
      return classic_ablation(net, x, attr, cfg);
    }
  }
  throw SpecError("unknown evaluator");
}

// One AblationReport per cell, in cell order. A failing cell records its
// error and the run continues.
inline std::vector<AblationReport> run_matrix(const Explainer& explainer,
                                              const std::vector<Tensor>& instances,
                                              const std::vector<MethodSpec>& cells,
                                              const MatrixOptions& opt) {
  std::vector<AblationReport> reports;
  reports.reserve(cells.size());
  for (const MethodSpec& cell : cells) {
    AblationReport r;
    r.method_tag = cell.method == Method::kIntegratedGradients ? "ig" : cell.tag();
    r.baseline_tag = cell.method == Method::kIntegratedGradients
                         ? std::string(baseline_name(cell.baseline))
                         : "";
    std::vector<AblationOutcome> outcomes(instances.size());
    try {
      parallel_for(instances.size(), opt.jobs, [&](std::size_t i) {
        outcomes[i] = score_instance(explainer, cell, instances[i], mix_seed(opt.seed, i), opt);
      });
      for (const AblationOutcome& o : outcomes) {
        r.scores.push_back(o.score);
        r.no_positive += o.no_positive;
      }
    } catch (const std::exception& e) {
      r.failures = 1;
      r.error = e.what();
      r.scores.clear();
    }
    summarize(r);
    reports.push_back(std::move(r));
  }
  return reports;
}

struct HybridWeightResult {
  HybridWeights weights;
  std::vector<double> mean_scores;
  // The score is the entropy-ablation mean, standing in for an unspecified
  // simple ablation test.
  std::string score_source = "entropy_ablation_mean";
};

// Per-method mean entropy-ablation score over a seeded sample of instances,
// clipped at zero and normalized.
inline HybridWeightResult compute_hybrid_weights(const Explainer& explainer,
                                                 const std::vector<Tensor>& instances,
                                                 const std::vector<MethodSpec>& methods,
                                                 std::size_t sample_size,
                                                 std::uint64_t seed, std::size_t jobs = 1) {
  if (methods.empty()) throw SpecError("hybrid weights need at least one method");
  std::vector<std::size_t> idx(instances.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  if (sample_size != 0 && sample_size < idx.size()) idx.resize(sample_size);
  std::vector<Tensor> sample;
  for (std::size_t i : idx) sample.push_back(instances[i]);
  MatrixOptions opt;
  opt.seed = seed;
  opt.jobs = jobs;
  auto reports = run_matrix(explainer, sample, methods, opt);
  HybridWeightResult r;
  for (const AblationReport& rep : reports) r.mean_scores.push_back(rep.mean);
  r.weights = hybrid_weights_from_scores(r.mean_scores);
  return r;
}

}  // namespace maxent
