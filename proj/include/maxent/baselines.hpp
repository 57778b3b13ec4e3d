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

// Integrated Gradients baselines, including the maximum-entropy baseline: the
// input whose softmaxed logits carry the largest Shannon entropy.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "maxent/data.hpp"
#include "maxent/entropy.hpp"
#include "maxent/nn.hpp"

namespace maxent {

enum class BaselineKind {
  kZero,
  kBlack,
  kWhite,
  kAvgInstance,
  kMaxEntropyUniform,
  kXdist,
  kTrainAvg,
  kBlur,
  kUniformNoise,
  kGaussianNoise,
  kMaxEntropyFull,
};

inline constexpr std::array<BaselineKind, 11> kAllBaselines = {
    BaselineKind::kZero,         BaselineKind::kBlack,
    BaselineKind::kWhite,        BaselineKind::kAvgInstance,
    BaselineKind::kMaxEntropyUniform, BaselineKind::kXdist,
    BaselineKind::kTrainAvg,     BaselineKind::kBlur,
    BaselineKind::kUniformNoise, BaselineKind::kGaussianNoise,
    BaselineKind::kMaxEntropyFull};

inline std::string_view baseline_name(BaselineKind k) {
  switch (k) {
    case BaselineKind::kZero: return "zero";
    case BaselineKind::kBlack: return "black";
    case BaselineKind::kWhite: return "white";
    case BaselineKind::kAvgInstance: return "avg";
    case BaselineKind::kMaxEntropyUniform: return "xentr_u";
    case BaselineKind::kXdist: return "xdist";
    case BaselineKind::kTrainAvg: return "train_avg";
    case BaselineKind::kBlur: return "blur";
    case BaselineKind::kUniformNoise: return "uniform";
    case BaselineKind::kGaussianNoise: return "gaussian";
    case BaselineKind::kMaxEntropyFull: return "xentr";
  }
  return "?";
}

inline BaselineKind parse_baseline(std::string_view name) {
  for (BaselineKind k : kAllBaselines) {
    if (baseline_name(k) == name) return k;
  }
  throw SpecError("unknown baseline kind '" + std::string(name) + "'");
}

// Whether the construction reads the explained input. Constant, dataset and
// model-derived baselines do not; black/white/avg/xdist/blur do.
inline bool reads_input(BaselineKind k) {
  switch (k) {
    case BaselineKind::kBlack:
    case BaselineKind::kWhite:
    case BaselineKind::kAvgInstance:
    case BaselineKind::kXdist:
    case BaselineKind::kBlur:
      return true;
    default:
      return false;
  }
}

// All values equal across coordinates.
inline bool is_uniform(BaselineKind k) {
  switch (k) {
    case BaselineKind::kZero:
    case BaselineKind::kBlack:
    case BaselineKind::kWhite:
    case BaselineKind::kAvgInstance:
    case BaselineKind::kMaxEntropyUniform:
      return true;
    default:
      return false;
  }
}

struct BaselineSpec {
  BaselineKind kind = BaselineKind::kZero;
  Tensor materialized;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, double>> params;
  std::optional<double> achieved_entropy;

  std::string tag() const { return std::string(baseline_name(kind)); }
};

struct EntropyCurve {
  ValueRange range;
  std::vector<double> inputs;
  std::vector<double> entropies;

  std::size_t argmax() const {
    return static_cast<std::size_t>(
        std::max_element(entropies.begin(), entropies.end()) - entropies.begin());
  }
};

inline Tensor constant_like(const Shape& shape, double v) { return Tensor(shape, v); }

// Entropy of softmaxed logits at constant inputs u * 1 for n equally spaced u.
inline EntropyCurve entropy_curve(const Network& net, const ValueRange& range,
                                  std::size_t n_samples) {
  if (n_samples < 2) throw SpecError("entropy_curve needs at least two samples");
  EntropyCurve curve{range, {}, {}};
  curve.inputs.reserve(n_samples);
  curve.entropies.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    double u = range.lo + range.width() * static_cast<double>(i) /
                              static_cast<double>(n_samples - 1);
    curve.inputs.push_back(u);
    curve.entropies.push_back(logits_entropy(net, constant_like(net.input_shape(), u)));
  }
  return curve;
}

struct UniformSearchResult {
  double value = 0.0;
  double entropy = 0.0;
  BaselineSpec baseline;
};

// Scalar u maximizing H(softmax(f(u * 1))) over the range: grid scan, then
// golden-section refinement inside the neighbouring grid cells. Ties keep the
// smallest u.
inline UniformSearchResult max_entropy_uniform(const Network& net,
                                               const ValueRange& range,
                                               std::size_t grid_n = 201,
                                               std::size_t refine_iters = 60) {
  if (grid_n < 3) throw SpecError("max_entropy_uniform needs grid_n >= 3");
  auto h_at = [&](double u) {
    return logits_entropy(net, constant_like(net.input_shape(), u));
  };
  const double step = range.width() / static_cast<double>(grid_n - 1);
  double best_u = range.lo, best_h = -1.0;
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < grid_n; ++i) {
    double u = range.lo + step * static_cast<double>(i);
    double h = h_at(u);
    if (h > best_h) {
      best_h = h;
      best_u = u;
      best_i = i;
    }
  }
  double a = range.lo + step * static_cast<double>(best_i == 0 ? 0 : best_i - 1);
  double b = range.lo + step * static_cast<double>(std::min(best_i + 1, grid_n - 1));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double hc = h_at(c), hd = h_at(d);
  for (std::size_t it = 0; it < refine_iters; ++it) {
    if (hc >= hd) {
      b = d;
      d = c;
      hd = hc;
      c = b - inv_phi * (b - a);
      hc = h_at(c);
    } else {
      a = c;
      c = d;
      hc = hd;
      d = a + inv_phi * (b - a);
      hd = h_at(d);
    }
    if (hc > best_h) {
      best_h = hc;
      best_u = c;
    }
    if (hd > best_h) {
      best_h = hd;
      best_u = d;
    }
  }
  UniformSearchResult r;
  r.value = best_u;
  r.entropy = best_h;
  r.baseline.kind = BaselineKind::kMaxEntropyUniform;
  r.baseline.materialized = constant_like(net.input_shape(), best_u);
  r.baseline.params = {{"grid_n", static_cast<double>(grid_n)},
                       {"refine_iters", static_cast<double>(refine_iters)},
                       {"value", best_u}};
  r.baseline.achieved_entropy = best_h;
  return r;
}

struct AscentOptions {
  std::size_t steps = 1000;
  // Absolute step size; unset means 0.05 * range width.
  std::optional<double> learning_rate;
  // Extra random starting points besides x0.
  std::size_t restarts = 0;
  std::uint64_t seed = 0;
};

struct FullSearchResult {
  BaselineSpec baseline;
  double entropy = 0.0;
  std::vector<double> trajectory;  // entropy per iterate of the winning run
};

namespace detail {

inline FullSearchResult ascend_entropy(const Network& net, Tensor x,
                                       const ValueRange& range, std::size_t steps,
                                       double lr) {
  FullSearchResult r;
  r.trajectory.reserve(steps + 1);
  Tensor grad;
  clip_into(x, range);
  r.baseline.materialized = x;
  r.entropy = -1.0;
  for (std::size_t s = 0; s <= steps; ++s) {
    double h = logits_entropy_gradient(net, x, grad);
    if (!std::isfinite(h) || !grad.all_finite()) {
      throw NumericError("entropy ascent: non-finite gradient at step " +
                         std::to_string(s));
    }
    r.trajectory.push_back(h);
    if (h > r.entropy) {
      r.entropy = h;
      r.baseline.materialized = x;
    }
    if (s == steps) break;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = range.clip(x[i] + lr * grad[i]);
  }
  return r;
}

}  // namespace detail

// Projected gradient ascent on H(softmax(f(x))), clipping into the range after
// every step. Returns the best iterate seen, not the last one.
inline FullSearchResult max_entropy_full(const Network& net, const Tensor& x0,
                                         const ValueRange& range,
                                         const AscentOptions& opt = {}) {
  if (opt.steps < 1) throw SpecError("max_entropy_full needs steps >= 1");
  net.check_input(x0);
  const double lr = opt.learning_rate.value_or(0.05 * range.width());
  FullSearchResult best = detail::ascend_entropy(net, x0, range, opt.steps, lr);
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> dist(range.lo, range.hi);
  for (std::size_t r = 0; r < opt.restarts; ++r) {
    Tensor start(net.input_shape());
    for (double& v : start) v = dist(rng);
    FullSearchResult run = detail::ascend_entropy(net, start, range, opt.steps, lr);
    if (run.entropy > best.entropy) best = std::move(run);
  }
  best.baseline.kind = BaselineKind::kMaxEntropyFull;
  best.baseline.seed = opt.seed;
  best.baseline.params = {{"steps", static_cast<double>(opt.steps)},
                          {"lr", lr},
                          {"restarts", static_cast<double>(opt.restarts)}};
  best.baseline.achieved_entropy = best.entropy;
  return best;
}

inline FullSearchResult max_entropy_full(const Network& net, const ValueRange& range,
                                         const AscentOptions& opt = {}) {
  return max_entropy_full(net, constant_like(net.input_shape(), range.mid()), range, opt);
}

// Separable Gaussian blur of a CHW image with half-sample symmetric borders.
inline Tensor gaussian_blur(const Tensor& x, double sigma, std::size_t kernel) {
  if (x.rank() != 3) {
    throw UnsupportedError("blur baseline needs an image-shaped (CHW) input, got " +
                           shape_string(x.shape()));
  }
  if (kernel % 2 == 0 || kernel < 1) throw SpecError("blur kernel size must be odd");
  if (!(sigma > 0.0)) throw SpecError("blur sigma must be positive");
  const long radius = static_cast<long>(kernel / 2);
  std::vector<double> k(kernel);
  double z = 0.0;
  for (long i = -radius; i <= radius; ++i) {
    z += k[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
  }
  for (double& v : k) v /= z;
  const long ch = static_cast<long>(x.shape()[0]);
  const long h = static_cast<long>(x.shape()[1]);
  const long w = static_cast<long>(x.shape()[2]);
  auto reflect = [](long i, long n) {
    while (i < 0 || i >= n) i = i < 0 ? -i - 1 : 2 * n - i - 1;
    return i;
  };
  Tensor tmp(x.shape()), out(x.shape());
  for (long c = 0; c < ch; ++c) {
    for (long r = 0; r < h; ++r) {
      for (long s = 0; s < w; ++s) {
        double acc = 0.0;
        for (long i = -radius; i <= radius; ++i) {
          acc += k[i + radius] * x[(c * h + r) * w + reflect(s + i, w)];
        }
        tmp[(c * h + r) * w + s] = acc;
      }
    }
    for (long r = 0; r < h; ++r) {
      for (long s = 0; s < w; ++s) {
        double acc = 0.0;
        for (long i = -radius; i <= radius; ++i) {
          acc += k[i + radius] * tmp[(c * h + reflect(r + i, h)) * w + s];
        }
        out[(c * h + r) * w + s] = acc;
      }
    }
  }
  return out;
}

struct BaselineParams {
  double blur_sigma = 2.0;
  std::size_t blur_kernel = 5;
  std::optional<double> gaussian_mean;   // default: range midpoint
  std::optional<double> gaussian_sigma;  // default: width / 4
  std::size_t train_avg_samples = 0;     // 0: every training instance
  std::size_t uniform_grid = 201;
  std::size_t uniform_refine = 60;
  AscentOptions ascent;
};

// Materializes baselines for one network. The two maximum-entropy baselines
// are input independent; prepare() computes them once so build() stays const
// and safe to call from several threads.
class BaselineBuilder {
 public:
  BaselineBuilder(const Network& net, ValueRange range,
                  const LabeledDataset* train_data = nullptr,
                  BaselineParams params = {})
      : net_(&net), range_(range), train_(train_data), params_(std::move(params)) {}

  const ValueRange& range() const { return range_; }
  const BaselineParams& params() const { return params_; }

  void prepare() {
    prepare_uniform();
    prepare_full();
  }
  void prepare_uniform() {
    if (!uniform_) {
      uniform_ = max_entropy_uniform(*net_, range_, params_.uniform_grid,
                                     params_.uniform_refine);
    }
  }
  // Ascends from the midpoint and from the uniform optimum, keeping the
  // better run; the second start makes full >= uniform hold by construction.
  void prepare_full() {
    if (full_) return;
    prepare_uniform();
    FullSearchResult mid = max_entropy_full(*net_, range_, params_.ascent);
    FullSearchResult warm =
        max_entropy_full(*net_, uniform_->baseline.materialized, range_, params_.ascent);
    full_ = warm.entropy > mid.entropy ? std::move(warm) : std::move(mid);
    full_->baseline.params.emplace_back("uniform_warm_start", 1.0);
  }

  // Replace the cached maximum-entropy baseline, e.g. after a warm restart.
  void set_max_entropy_full(FullSearchResult r) { full_ = std::move(r); }

  const UniformSearchResult& max_entropy_uniform_result() {
    prepare_uniform();
    return *uniform_;
  }
  const FullSearchResult& max_entropy_full_result() {
    prepare_full();
    return *full_;
  }
  const UniformSearchResult& max_entropy_uniform_result() const {
    if (!uniform_) throw SpecError("uniform maximum-entropy baseline not prepared");
    return *uniform_;
  }
  const FullSearchResult& max_entropy_full_result() const {
    if (!full_) throw SpecError("maximum-entropy baseline not prepared");
    return *full_;
  }

  BaselineSpec build(BaselineKind kind, const Tensor& x, std::uint64_t seed) const {
    net_->check_input(x);
    BaselineSpec spec;
    spec.kind = kind;
    spec.seed = seed;
    const Shape& shape = x.shape();
    switch (kind) {
      case BaselineKind::kZero:
        spec.materialized = Tensor(shape, 0.0);
        break;
      case BaselineKind::kBlack:
        spec.materialized = Tensor(shape, x.min());
        break;
      case BaselineKind::kWhite:
        spec.materialized = Tensor(shape, x.max());
        break;
      case BaselineKind::kAvgInstance:
        spec.materialized = Tensor(shape, x.mean());
        break;
      case BaselineKind::kXdist: {
        spec.materialized = Tensor(shape);
        const double mid = range_.mid();
        for (std::size_t i = 0; i < x.size(); ++i) {
          spec.materialized[i] = x[i] > mid ? range_.lo : range_.hi;
        }
        break;
      }
      case BaselineKind::kTrainAvg:
        spec.materialized = train_average(seed, spec);
        break;
      case BaselineKind::kBlur:
        spec.materialized = gaussian_blur(x, params_.blur_sigma, params_.blur_kernel);
        spec.params = {{"sigma", params_.blur_sigma},
                       {"kernel", static_cast<double>(params_.blur_kernel)}};
        break;
      case BaselineKind::kUniformNoise: {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> dist(range_.lo, range_.hi);
        spec.materialized = Tensor(shape);
        for (double& v : spec.materialized) v = dist(rng);
        break;
      }
      case BaselineKind::kGaussianNoise: {
        const double mu = params_.gaussian_mean.value_or(range_.mid());
        const double sd = params_.gaussian_sigma.value_or(range_.width() / 4.0);
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> dist(mu, sd);
        spec.materialized = Tensor(shape);
        for (double& v : spec.materialized) v = dist(rng);
        spec.params = {{"mean", mu}, {"sigma", sd}};
        break;
      }
      case BaselineKind::kMaxEntropyUniform:
        return max_entropy_uniform_result().baseline;
      case BaselineKind::kMaxEntropyFull:
        return max_entropy_full_result().baseline;
      default:
        throw SpecError("unknown baseline kind");
    }
    clip_into(spec.materialized, range_);
    return spec;
  }

 private:
  Tensor train_average(std::uint64_t seed, BaselineSpec& spec) const {
    if (!train_ || train_->train_indices.empty()) {
      throw SpecError("train_avg baseline needs a training dataset");
    }
    std::vector<std::size_t> pool = train_->train_indices;
    std::size_t take = params_.train_avg_samples;
    if (take != 0 && take < pool.size()) {
      std::mt19937_64 rng(seed);
      std::shuffle(pool.begin(), pool.end(), rng);
      pool.resize(take);
    }
    Tensor mean(net_->input_shape());
    for (std::size_t i : pool) mean += train_->instances[i];
    mean *= 1.0 / static_cast<double>(pool.size());
    spec.params = {{"samples", static_cast<double>(pool.size())}};
    return mean;
  }

  const Network* net_;
  ValueRange range_;
  const LabeledDataset* train_;
  BaselineParams params_;
  std::optional<UniformSearchResult> uniform_;
  std::optional<FullSearchResult> full_;
};

inline BaselineSpec build_baseline(BaselineKind kind, const Network& net, const Tensor& x,
                                   const LabeledDataset* train_data,
                                   const ValueRange& range,
                                   const BaselineParams& params, std::uint64_t seed) {
  BaselineBuilder builder(net, range, train_data, params);
  if (kind == BaselineKind::kMaxEntropyUniform) builder.prepare_uniform();
  if (kind == BaselineKind::kMaxEntropyFull) builder.prepare_full();
  return builder.build(kind, x, seed);
}

}  // namespace maxent
