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
// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Intermediate tables land under --out.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "maxent/maxent.hpp"

namespace {

using namespace maxent;
using nlohmann::json;
namespace fs = std::filesystem;

// Pinned tolerances.
constexpr double kCoincidenceWidth = 0.05;   // 1: fraction of range width
constexpr double kDominanceShare = 0.90;     // 2
constexpr double kInvariantTol = 1e-6;       // 3
constexpr double kVariantTol = 1e-3;         // 3
constexpr double kLogitTol = 1e-12;          // 3
constexpr double kPhaseTol = 1e-9;           // 4
constexpr double kDescentMargin = 0.10;      // 5
constexpr double kEntropySlack = 1e-3;       // 5
constexpr double kRandomMedian = 0.02;       // 6
constexpr double kAblationFraction = 0.05;   // 6, 7
constexpr double kCompletenessTol = 1e-3;    // 8
constexpr double kLinearTol = 1e-6;          // 8
constexpr double kPrimitiveTol = 1e-12;      // 9

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---------------------------------------------------------------------------
// Shared models.

struct ToyModel {
  ToySpec spec;
  Network net;
  GroundTruthMask mask;
  std::vector<Tensor> all;
  double accuracy = 0.0;
};

ToyModel train_toy(std::size_t f, std::size_t k, std::size_t c, std::uint64_t seed) {
  ToyModel m;
  m.spec = ToySpec{f, k, c, 2, 10000, seed};
  auto [ds, mask] = toy_generate(m.spec);
  TrainConfig cfg;
  cfg.epochs = 60;
  cfg.learning_rate = 0.01;
  cfg.weight_decay = 1e-3;
  cfg.seed = seed;
  TrainReport r = train(make_mlp({f}, {32}, c, seed + 1), ds, cfg);
  m.net = std::move(r.network);
  m.mask = std::move(mask);
  m.all = toy_all_instances(m.spec);
  m.accuracy = r.test_accuracy;
  return m;
}

struct ToyConfig {
  std::size_t f, k, c;
};

std::vector<ToyConfig> toy_configs() {
  std::vector<ToyConfig> out;
  for (std::size_t f : {2, 3, 4}) {
    for (auto [k, c] : {std::pair<std::size_t, std::size_t>{1, 2}, {2, 2}, {2, 3}, {2, 4}}) {
      out.push_back({f, k, c});
    }
  }
  return out;
}

struct ImageModel {
  std::string name;
  LabeledDataset data;
  Network net;
  double test_accuracy = 0.0;
};

constexpr ValueRange kGlyphRange{-0.42, 2.82};

LabeledDataset glyph_data(std::uint64_t seed) {
  GlyphSpec g;
  g.seed = seed;
  return normalize(glyph_generate(g), kGlyphRange);
}

ImageModel train_image(bool cnn, std::uint64_t seed) {
  ImageModel m;
  m.name = std::string(cnn ? "cnn" : "fc") + "_seed" + std::to_string(seed);
  m.data = glyph_data(seed);
  const Shape& shape = m.data.sample_shape;
  Network init = cnn ? make_cnn(shape, 10, CnnShape{}, seed + 2)
                     : make_mlp(shape, {64}, 10, seed + 1);
  TrainConfig cfg;
  cfg.epochs = 8;
  cfg.learning_rate = 1e-3;
  cfg.seed = seed;
  TrainReport r = train(init, m.data, cfg);
  m.net = std::move(r.network);
  m.test_accuracy = r.test_accuracy;
  return m;
}

std::vector<Tensor> test_set(const LabeledDataset& ds, std::size_t n) {
  std::vector<Tensor> xs;
  for (std::size_t i : ds.test_indices) {
    if (xs.size() == n) break;
    xs.push_back(ds.instances[i]);
  }
  return xs;
}

Tensor uniform_tensor(const Shape& shape, const ValueRange& r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(r.lo, r.hi);
  Tensor t(shape);
  for (double& v : t) v = d(rng);
  return t;
}

double toy_mean_kl(const ToyModel& m, const BaselineBuilder& b, BaselineKind kind,
                   std::uint64_t seed) {
  double total = 0.0;
  for (std::size_t i = 0; i < m.all.size(); ++i) {
    const Tensor& x = m.all[i];
    BaselineSpec base = b.build(kind, x, mix_seed(seed, i));
    total += kl_loss(integrated_gradients(m.net, x, base, predict(m.net, x)), m.mask);
  }
  return total / static_cast<double>(m.all.size());
}

// ---------------------------------------------------------------------------
// Criteria.

Outcome toy_coincidence(const fs::path& out) {
  auto os = open_output(out / "c1_toy_coincidence.csv");
  os << "f,k,c,test_accuracy,kl_argmin,entropy_argmax,gap,within\n";
  const ValueRange range{0.0, 1.0};
  std::size_t hits = 0, total = 0;
  for (const ToyConfig& tc : toy_configs()) {
    ToyModel m = train_toy(tc.f, tc.k, tc.c, 0);
    SweepCurve loss = mean_baseline_sweep(m.net, m.all, m.mask, range, 200);
    EntropyCurve ec = entropy_curve(m.net, range, 200);
    const double argmax = ec.inputs[ec.argmax()];
    const double gap = std::abs(loss.argmin_value() - argmax);
    const bool within = gap <= kCoincidenceWidth * range.width();
    hits += within;
    ++total;
    os << tc.f << ',' << tc.k << ',' << tc.c << ',' << fmt_double(m.accuracy) << ','
       << fmt_double(loss.argmin_value()) << ',' << fmt_double(argmax) << ','
       << fmt_double(gap) << ',' << within << '\n';
  }
  return {hits >= 9, fmt("%zu/%zu configurations within %.2f of the width (need >= 9)", hits,
                         total, kCoincidenceWidth)};
}

Outcome toy_dominance(const fs::path& out) {
  auto os = open_output(out / "c2_toy_dominance.csv");
  os << "f,k,c,seed,xentr_u,zero,black,white,random,dominates\n";
  const ValueRange range{0.0, 1.0};
  std::size_t wins = 0, total = 0;
  for (const ToyConfig& tc : toy_configs()) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      ToyModel m = train_toy(tc.f, tc.k, tc.c, seed);
      BaselineBuilder b(m.net, range);
      b.prepare();
      const double xu = toy_mean_kl(m, b, BaselineKind::kMaxEntropyUniform, seed);
      const double others[] = {toy_mean_kl(m, b, BaselineKind::kZero, seed),
                               toy_mean_kl(m, b, BaselineKind::kBlack, seed),
                               toy_mean_kl(m, b, BaselineKind::kWhite, seed),
                               toy_mean_kl(m, b, BaselineKind::kUniformNoise, seed)};
      bool dominates = true;
      for (double o : others) dominates = dominates && xu < o;
      wins += dominates;
      ++total;
      os << tc.f << ',' << tc.k << ',' << tc.c << ',' << seed << ',' << fmt_double(xu);
      for (double o : others) os << ',' << fmt_double(o);
      os << ',' << dominates << '\n';
    }
  }
  const double share = static_cast<double>(wins) / static_cast<double>(total);
  return {share >= kDominanceShare,
          fmt("%zu/%zu (config, seed) pairs strictly below zero/black/white/random (%.1f%%, "
              "need >= %.0f%%)",
              wins, total, 100.0 * share, 100.0 * kDominanceShare)};
}

Outcome shift_invariance(const ImageModel& fc) {
  std::vector<Tensor> xs = test_set(fc.data, 20);
  Tensor zero(fc.net.input_shape(), 0.0);
  ShiftSpec uni{ShiftShape::kUniform, 0.5}, cross{ShiftShape::kCross, 0.5};
  auto shifted = linear_transform_test(fc.net, xs, uni, BaselinePolicy::kShiftWithInput, zero);
  auto held = linear_transform_test(fc.net, xs, uni, BaselinePolicy::kHold, zero);
  auto crossed =
      linear_transform_test(fc.net, xs, cross, BaselinePolicy::kShiftWithInput, zero);
  const double logit = std::max({shifted.max_logit_diff, held.max_logit_diff,
                                 crossed.max_logit_diff});
  const bool pass = shifted.max_attribution_diff < kInvariantTol &&
                    held.max_attribution_diff > kVariantTol &&
                    crossed.max_attribution_diff > kVariantTol && logit < kLogitTol;
  return {pass, fmt("shifted %.2e (< %.0e), held %.3f, cross %.3f (> %.0e), logits %.2e (< %.0e)",
                    shifted.max_attribution_diff, kInvariantTol, held.max_attribution_diff,
                    crossed.max_attribution_diff, kVariantTol, logit, kLogitTol)};
}

Outcome phase_identity(const ImageModel& fc) {
  const double a = 0.5;
  const ValueRange r = fc.data.value_range;
  Network shifted = absorb_input_shift(fc.net, Tensor(fc.net.input_shape(), a));
  // Shifted inputs live in [lo + a, hi + a]; the overlap with [lo, hi] is [lo + a, hi].
  double worst = 0.0;
  for (double u : grid({r.lo + a, r.hi}, 500)) {
    const double hu = logits_entropy(shifted, Tensor(fc.net.input_shape(), u));
    const double h = logits_entropy(fc.net, Tensor(fc.net.input_shape(), u - a));
    worst = std::max(worst, std::abs(hu - h));
  }
  return {worst < kPhaseTol, fmt("max |H_U(u) - H(u - A_s)| = %.2e over 500 points (< %.0e)",
                                 worst, kPhaseTol)};
}

Outcome nonconservation(const std::vector<const ImageModel*>& models, const fs::path& out) {
  auto os = open_output(out / "c5_nonconservation.csv");
  os << "model,class,zero_logit,best_logit\n";
  bool pass = true;
  std::string detail;
  for (const ImageModel* m : models) {
    const ValueRange r = m->data.value_range;
    const Tensor zero(m->net.input_shape(), 0.0);
    const Tensor logits_zero = m->net.forward(zero);
    std::size_t logit_ok = 0;
    double worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t cls = 0; cls < m->net.class_count(); ++cls) {
      NonconservationOptions opt;
      opt.cls = cls;
      opt.steps = 1000;
      NonconservationResult res = nonconservation_demo(m->net, r, opt);
      const double fz = logits_zero[cls];
      const bool in_range = res.best_input.min() >= r.lo && res.best_input.max() <= r.hi;
      const bool ok = in_range && res.best_value <= fz - kDescentMargin * std::abs(fz);
      logit_ok += ok;
      worst_margin = std::min(worst_margin, (fz - res.best_value) / std::max(std::abs(fz), 1e-12));
      os << m->name << ',' << cls << ',' << fmt_double(fz) << ',' << fmt_double(res.best_value)
         << '\n';
    }
    BaselineBuilder b(m->net, r, &m->data);
    b.prepare();
    const double h_b = b.max_entropy_full_result().entropy;
    double best = 0.0;
    for (std::uint64_t s = 0; s < 20; ++s) {
      NonconservationOptions opt;
      opt.target = AblationTarget::kEntropy;
      opt.start = uniform_tensor(m->net.input_shape(), r, mix_seed(5, s));
      best = std::max(best, nonconservation_demo(m->net, r, opt).best_value);
    }
    for (std::uint64_t s = 0; s < 10000; ++s) {
      best = std::max(best, logits_entropy(m->net,
                                           uniform_tensor(m->net.input_shape(), r,
                                                          mix_seed(55, s))));
    }
    const bool entropy_ok = best <= h_b + kEntropySlack;
    pass = pass && logit_ok == m->net.class_count() && entropy_ok;
    detail += fmt("%s: logit %zu/%zu classes >= 10%% below zero (min margin %.0f%%), "
                  "probe max H %.5f vs H(B) %.5f; ",
                  m->name.c_str(), logit_ok, m->net.class_count(), 100.0 * worst_margin, best,
                  h_b);
  }
  detail.resize(detail.size() - 2);
  return {pass, detail};
}

struct MatrixRun {
  std::vector<AblationReport> reports;

  const AblationReport& cell(const std::string& name) const {
    for (const auto& r : reports) {
      if (cell_name(r) == name) return r;
    }
    throw SpecError("no cell " + name);
  }
};

MatrixRun run_image_matrix(const ImageModel& m, const std::vector<MethodSpec>& cells,
                           std::optional<double> fraction, std::size_t n,
                           const fs::path& out) {
  BaselineBuilder b(m.net, m.data.value_range, &m.data);
  b.prepare();
  Explainer ex(m.net, b);
  MatrixOptions opt;
  opt.fraction = fraction;
  opt.seed = 6;
  MatrixRun run{run_matrix(ex, test_set(m.data, n), cells, opt)};
  write_summary_csv(out, run.reports);
  return run;
}

const std::vector<BaselineKind> kNonUniform = {
    BaselineKind::kXdist,        BaselineKind::kTrainAvg,      BaselineKind::kBlur,
    BaselineKind::kUniformNoise, BaselineKind::kGaussianNoise, BaselineKind::kMaxEntropyFull};

std::vector<MethodSpec> full_cells() {
  std::vector<BaselineKind> all(kAllBaselines.begin(), kAllBaselines.end());
  return expand_cells({{Method::kRandom}, {Method::kVanilla}, {Method::kGradInput},
                       {Method::kGuided}, {Method::kGuidedSmoothGrad}, {Method::kSmoothGrad},
                       {Method::kIntegratedGradients}},
                      all);
}

Outcome method_sanity(const std::vector<const ImageModel*>& models, const fs::path& out,
                      std::vector<MatrixRun>& runs) {
  bool pass = true;
  std::string detail;
  for (const ImageModel* m : models) {
    MatrixRun run = run_image_matrix(*m, full_cells(), kAblationFraction, 500,
                                     out / ("c6_" + m->name + "_summary.csv"));
    double random_median = std::abs(run.cell("random").median);
    double min_gradient = std::numeric_limits<double>::infinity();
    std::string argmin;
    bool failed_cell = false;
    for (const auto& r : run.reports) {
      failed_cell = failed_cell || r.failures != 0 || r.scores.size() != 500;
      if (r.method_tag == "random") continue;
      if (r.median < min_gradient) {
        min_gradient = r.median;
        argmin = cell_name(r);
      }
    }
    pass = pass && !failed_cell && random_median < kRandomMedian && min_gradient > 0.0;
    detail += fmt("%s: random median %.4f (< %.2f), smallest gradient-method median %.4f "
                  "(%s); ",
                  m->name.c_str(), random_median, kRandomMedian, min_gradient, argmin.c_str());
    runs.push_back(std::move(run));
  }
  detail += fmt("500 instances, ablating %.0f%% of features", 100.0 * kAblationFraction);
  return {pass, detail};
}

// Every positively attributed feature ablated; reported, not graded.
std::string all_positive_note(const ImageModel& fc, const fs::path& out) {
  MatrixRun run = run_image_matrix(fc, {{Method::kRandom}, {Method::kVanilla}}, std::nullopt,
                                   500, out / "c6_all_positive_summary.csv");
  return fmt("random median %.4f, vanilla median %.4f", run.cell("random").median,
             run.cell("vanilla").median);
}

Outcome xdist_inferiority(const MatrixRun& seed0, const std::vector<const ImageModel*>& others,
                          const fs::path& out) {
  std::vector<MatrixRun> runs;
  runs.push_back(seed0);
  for (const ImageModel* m : others) {
    runs.push_back(run_image_matrix(*m, expand_cells({{Method::kIntegratedGradients}},
                                                     kNonUniform),
                                    kAblationFraction, 500,
                                    out / ("c7_" + m->name + "_summary.csv")));
  }
  bool pass = true;
  std::string detail;
  for (std::size_t s = 0; s < runs.size(); ++s) {
    double xdist = runs[s].cell("ig_xdist").median;
    double next = std::numeric_limits<double>::infinity();
    std::string next_name;
    for (BaselineKind k : kNonUniform) {
      if (k == BaselineKind::kXdist) continue;
      std::string name = "ig_" + std::string(baseline_name(k));
      double v = runs[s].cell(name).median;
      if (v < next) {
        next = v;
        next_name = name;
      }
    }
    pass = pass && xdist < next;
    detail += fmt("seed %zu: xdist %.4f vs next %.4f (%s); ", s, xdist, next, next_name.c_str());
  }
  detail.resize(detail.size() - 2);
  return {pass, detail};
}

Outcome completeness(const std::vector<const ImageModel*>& models, const fs::path& out) {
  auto os = open_output(out / "c8_completeness.csv");
  os << "model,pair,target,sum,error\n";
  bool pass = true;
  std::string detail;
  for (const ImageModel* m : models) {
    std::vector<Tensor> xs = test_set(m->data, 100);
    double worst = 0.0;
    std::size_t within = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      Tensor base = uniform_tensor(m->net.input_shape(), m->data.value_range, mix_seed(8, i));
      const std::size_t cls = predict(m->net, xs[i]);
      AttributionMap a = integrated_gradients(m->net, xs[i], base, cls, 100);
      const double target = m->net.forward(xs[i])[cls] - m->net.forward(base)[cls];
      const double err = std::abs(a.values.sum() - target);
      worst = std::max(worst, err);
      within += err <= kCompletenessTol;
      os << m->name << ',' << i << ',' << fmt_double(target) << ','
         << fmt_double(a.values.sum()) << ',' << fmt_double(err) << '\n';
    }
    pass = pass && worst <= kCompletenessTol;
    detail += fmt("%s: %zu/100 within %.0e (worst %.2e); ", m->name.c_str(), within,
                  kCompletenessTol, worst);
  }
  double linear_worst = 0.0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    Dense d = make_dense(30, 4);
    std::mt19937_64 rng(s);
    std::normal_distribution<double> g(0.0, 1.0);
    for (double& w : d.weight) w = g(rng);
    for (double& b : d.bias) b = g(rng);
    Network lin({30}, {d});
    Tensor x = uniform_tensor({30}, {-3, 3}, mix_seed(9, s));
    Tensor b = uniform_tensor({30}, {-3, 3}, mix_seed(10, s));
    for (std::size_t steps : {1, 2, 3, 10, 100}) {
      for (std::size_t cls = 0; cls < 4; ++cls) {
        double target = lin.forward(x)[cls] - lin.forward(b)[cls];
        double sum = integrated_gradients(lin, x, b, cls, steps).values.sum();
        linear_worst = std::max(linear_worst, std::abs(sum - target));
      }
    }
  }
  pass = pass && linear_worst <= kLinearTol;
  detail += fmt("linear worst %.2e (<= %.0e)", linear_worst, kLinearTol);
  return {pass, detail};
}

Outcome entropy_primitives(const std::vector<const ImageModel*>& models) {
  double worst_uniform = 0.0, worst_onehot = 0.0;
  for (std::size_t c = 1; c <= 64; ++c) {
    std::vector<double> u(c, 1.0 / static_cast<double>(c)), one(c, 0.0);
    one[c / 2] = 1.0;
    worst_uniform = std::max(worst_uniform, std::abs(entropy(u) - std::log(double(c))));
    worst_onehot = std::max(worst_onehot, std::abs(entropy(one)));
  }
  double worst_excess = -std::numeric_limits<double>::infinity();
  std::size_t evaluated = 0;
  for (const ImageModel* m : models) {
    const double bound = std::log(static_cast<double>(m->net.class_count()));
    auto check = [&](const Tensor& x) {
      worst_excess = std::max(worst_excess, logits_entropy(m->net, x) - bound);
      ++evaluated;
    };
    for (const Tensor& x : m->data.instances) check(x);
    for (std::uint64_t s = 0; s < 2000; ++s) {
      check(uniform_tensor(m->net.input_shape(), m->data.value_range, mix_seed(90, s)));
      check(uniform_tensor(m->net.input_shape(), {-1e3, 1e3}, mix_seed(91, s)));
    }
    BaselineBuilder b(m->net, m->data.value_range, &m->data);
    b.prepare();
    const Tensor& x = m->data.instances[m->data.test_indices.front()];
    for (BaselineKind k : kAllBaselines) check(b.build(k, x, 3).materialized);
  }
  const bool pass = worst_uniform <= kPrimitiveTol && worst_onehot <= kPrimitiveTol &&
                    worst_excess <= 0.0;
  return {pass, fmt("|H(uniform_c) - ln c| %.1e, H(one-hot) %.1e for c <= 64 (<= %.0e); "
                    "max H - ln c over %zu logits_entropy values %.2e (<= 0)",
                    worst_uniform, worst_onehot, kPrimitiveTol, evaluated, worst_excess)};
}

// A whole toy pipeline driven by a RunConfig-style JSON document.
void run_pipeline(const json& cfg, const fs::path& out) {
  const json& d = cfg.at("dataset");
  auto size = [](const json& j) { return j.get<std::size_t>(); };
  const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
  ToySpec spec{size(d.at("features")), size(d.at("relevant")), size(d.at("classes")),
               size(d.at("domain")), size(d.at("count")), seed};
  auto [ds, mask] = toy_generate(spec);
  TrainConfig tc;
  tc.epochs = size(cfg.at("train").at("epochs"));
  tc.learning_rate = cfg.at("train").at("learning_rate").get<double>();
  tc.weight_decay = cfg.at("train").at("weight_decay").get<double>();
  tc.seed = seed;
  auto hidden = cfg.at("model").at("hidden").get<std::vector<std::size_t>>();
  TrainReport r = train(make_mlp({spec.features}, hidden, spec.classes, seed + 1), ds, tc);
  save_model(out / "model.txt", r.network);
  std::vector<double> epochs(r.epoch_loss.size());
  std::iota(epochs.begin(), epochs.end(), 1.0);
  write_two_column_csv(out / "epoch_loss.csv", "epoch", "loss", epochs, r.epoch_loss);

  const ValueRange range = ds.value_range;
  BaselineBuilder b(r.network, range, &ds);
  b.prepare();
  Explainer ex(r.network, b);
  std::vector<MethodSpec> methods;
  for (const auto& name : cfg.at("methods")) {
    methods.push_back(parse_method(name.get<std::string>()));
  }
  MatrixOptions opt;
  opt.seed = seed;
  opt.jobs = size(cfg.at("jobs"));
  std::vector<Tensor> xs;
  for (std::size_t i : ds.test_indices) xs.push_back(ds.instances[i]);
  xs.resize(std::min(xs.size(), size(cfg.at("instances"))));
  auto reports = run_matrix(ex, xs, methods, opt);
  for (const auto& rep : reports) write_cell_csv(out / "cells" / (cell_name(rep) + ".csv"), rep);
  write_summary_csv(out / "summary.csv", reports);

  auto all = toy_all_instances(spec);
  SweepCurve c = mean_baseline_sweep(r.network, all, mask, range, 50, 100, opt.jobs);
  write_two_column_csv(out / "loss_curve.csv", "baseline", "kl_loss", c.inputs, c.losses);
  EntropyCurve ec = entropy_curve(r.network, range, 50);
  write_two_column_csv(out / "entropy_curve.csv", "baseline", "entropy", ec.inputs,
                       ec.entropies);
  export_attribution(out / "attr" / "ig_xentr",
                     ex.explain(parse_method("ig_xentr"), xs.front(), 0, seed), seed);
  export_baseline(out / "baseline" / "xentr", b.max_entropy_full_result().baseline);
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

Outcome determinism(const fs::path& out) {
  json cfg = {{"seed", 17},
              {"jobs", 1},
              {"instances", 60},
              {"dataset", {{"features", 4}, {"relevant", 2}, {"classes", 3},
                           {"domain", 2}, {"count", 4000}}},
              {"model", {{"hidden", {16}}}},
              {"train", {{"epochs", 10}, {"learning_rate", 0.01}, {"weight_decay", 1e-3}}},
              {"methods", {"random", "smoothgrad", "guided_sg", "ig_xentr", "ig_uniform",
                           "ig_gaussian", "ig_train_avg"}}};
  const fs::path dir = out / "c10";
  fs::remove_all(dir);
  write_json(dir / "archived.json", cfg);
  const fs::path runs[] = {dir / "run_a", dir / "run_b", dir / "run_jobs"};
  for (const fs::path& r : runs) {
    json archived = json::parse(slurp(dir / "archived.json"));
    if (r == runs[2]) archived["jobs"] = 4;
    run_pipeline(archived, r);
  }
  std::size_t files = 0, same = 0;
  for (const auto& e : fs::recursive_directory_iterator(runs[0])) {
    if (!e.is_regular_file()) continue;
    const fs::path rel = fs::relative(e.path(), runs[0]);
    const std::string a = slurp(e.path());
    bool ok = true;
    for (std::size_t k = 1; k < 3; ++k) {
      ok = ok && fs::exists(runs[k] / rel) && slurp(runs[k] / rel) == a;
    }
    ++files;
    same += ok;
  }
  return {files > 0 && same == files,
          fmt("%zu/%zu output files byte-identical across 3 reruns of one archived config "
              "(jobs 1, 1, 4)",
              same, files)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maxent acceptance suite"};
  std::string out_dir = "acceptance_out";
  std::vector<int> only;
  app.add_option("--out", out_dir, "directory for intermediate tables");
  app.add_option("--only", only, "run a subset of criteria")->delimiter(',');
  CLI11_PARSE(app, argc, argv);
  const fs::path out(out_dir);
  fs::create_directories(out);
  std::set<int> selected(only.begin(), only.end());
  auto want = [&](int id) { return selected.empty() || selected.count(id) > 0; };

  std::optional<ImageModel> fc0, fc1, fc2, cnn0;
  auto need_images = [&] {
    if (fc0) return;
    fc0 = train_image(false, 0);
    cnn0 = train_image(true, 0);
    std::printf("# trained %s (test accuracy %.4f), %s (test accuracy %.4f)\n",
                fc0->name.c_str(), fc0->test_accuracy, cnn0->name.c_str(),
                cnn0->test_accuracy);
  };

  int failures = 0;
  auto report = [&](int id, const char* name, auto fn) {
    if (!want(id)) return;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !o.pass;
    std::printf("%s  [%2d] %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  };

  report(1, "toy coincidence", [&] { return toy_coincidence(out); });
  report(2, "toy baseline dominance", [&] { return toy_dominance(out); });
  report(3, "uniform-shift invariance", [&] {
    need_images();
    return shift_invariance(*fc0);
  });
  report(4, "entropy phase identity", [&] {
    need_images();
    return phase_identity(*fc0);
  });
  report(5, "non-conservation", [&] {
    need_images();
    return nonconservation({&*fc0, &*cnn0}, out);
  });
  std::vector<MatrixRun> sanity_runs;
  report(6, "method sanity ranking", [&] {
    need_images();
    return method_sanity({&*fc0, &*cnn0}, out, sanity_runs);
  });
  if (want(6) && fc0) {
    std::printf("INFO  [ 6] all positive features ablated (fc_seed0): %s\n",
                all_positive_note(*fc0, out).c_str());
  }
  report(7, "xdist inferiority", [&] {
    need_images();
    fc1 = train_image(false, 1);
    fc2 = train_image(false, 2);
    MatrixRun seed0 = sanity_runs.empty()
                          ? run_image_matrix(*fc0, expand_cells({{Method::kIntegratedGradients}},
                                                                kNonUniform),
                                             kAblationFraction, 500,
                                             out / "c7_fc_seed0_summary.csv")
                          : sanity_runs.front();
    return xdist_inferiority(seed0, {&*fc1, &*fc2}, out);
  });
  report(8, "IG completeness", [&] {
    need_images();
    return completeness({&*fc0, &*cnn0}, out);
  });
  report(9, "entropy primitives", [&] {
    need_images();
    return entropy_primitives({&*fc0, &*cnn0});
  });
  report(10, "determinism", [&] { return determinism(out); });

  std::printf("%s: %d criterion(s) failed\n", failures ? "FAILED" : "OK", failures);
  return failures ? 1 : 0;
}
