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

// Small feed-forward networks with exact reverse-mode input gradients.
//
// Supported layers are Dense, Conv2D (stride 1, valid padding), ReLU,
// MaxPool2x2 and Flatten. Image tensors are laid out CHW. The network ends in
// raw logits; softmax is applied by callers when they need probabilities.

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "maxent/tensor.hpp"

namespace maxent {

struct Dense {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> weight;  // out x in, row-major
  std::vector<double> bias;    // out
};

struct Conv2D {
  std::size_t in_channels = 0;
  std::size_t out_channels = 0;
  std::size_t kernel_h = 0;
  std::size_t kernel_w = 0;
  std::vector<double> weight;  // out x in x kh x kw
  std::vector<double> bias;    // out
};

struct Relu {};
struct MaxPool2x2 {};
struct Flatten {};

using Layer = std::variant<Dense, Conv2D, Relu, MaxPool2x2, Flatten>;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

inline const char* layer_name(const Layer& layer) {
  return std::visit(Overloaded{[](const Dense&) { return "dense"; },
                               [](const Conv2D&) { return "conv2d"; },
                               [](const Relu&) { return "relu"; },
                               [](const MaxPool2x2&) { return "maxpool2x2"; },
                               [](const Flatten&) { return "flatten"; }},
                    layer);
}

inline Dense make_dense(std::size_t in, std::size_t out) {
  return Dense{in, out, std::vector<double>(in * out, 0.0),
               std::vector<double>(out, 0.0)};
}

inline Conv2D make_conv(std::size_t in_channels, std::size_t out_channels,
                        std::size_t kh, std::size_t kw) {
  return Conv2D{in_channels, out_channels, kh, kw,
                std::vector<double>(out_channels * in_channels * kh * kw, 0.0),
                std::vector<double>(out_channels, 0.0)};
}

// Reverse pass flavour. Guided additionally zeroes negative signal at ReLUs.
enum class BackpropRule { kPlain, kGuided };

namespace detail {

inline Shape layer_output_shape(const Layer& layer, const Shape& in) {
  return std::visit(
      Overloaded{
          [&](const Dense& d) -> Shape {
            if (shape_size(in) != d.in) {
              throw DimensionError("dense layer expects " + std::to_string(d.in) +
                                   " inputs, got " + shape_string(in));
            }
            if (d.weight.size() != d.in * d.out || d.bias.size() != d.out) {
              throw DimensionError("dense layer parameter sizes are inconsistent");
            }
            return {d.out};
          },
          [&](const Conv2D& c) -> Shape {
            if (in.size() != 3 || in[0] != c.in_channels || in[1] < c.kernel_h ||
                in[2] < c.kernel_w) {
              throw DimensionError("conv2d layer cannot consume " + shape_string(in));
            }
            if (c.weight.size() !=
                    c.out_channels * c.in_channels * c.kernel_h * c.kernel_w ||
                c.bias.size() != c.out_channels) {
              throw DimensionError("conv2d parameter sizes are inconsistent");
            }
            return {c.out_channels, in[1] - c.kernel_h + 1, in[2] - c.kernel_w + 1};
          },
          [&](const Relu&) -> Shape { return in; },
          [&](const MaxPool2x2&) -> Shape {
            if (in.size() != 3 || in[1] < 2 || in[2] < 2) {
              throw DimensionError("maxpool2x2 cannot consume " + shape_string(in));
            }
            return {in[0], in[1] / 2, in[2] / 2};
          },
          [&](const Flatten&) -> Shape { return {shape_size(in)}; }},
      layer);
}

inline void dense_forward(const Dense& d, std::span<const double> x,
                          std::span<double> y) {
  for (std::size_t o = 0; o < d.out; ++o) {
    const double* w = d.weight.data() + o * d.in;
    double acc = d.bias[o];
    for (std::size_t i = 0; i < d.in; ++i) acc += w[i] * x[i];
    y[o] = acc;
  }
}

inline void conv_forward(const Conv2D& c, const Shape& in_shape,
                         std::span<const double> x, std::span<double> y) {
  const std::size_t h = in_shape[1], w = in_shape[2];
  const std::size_t oh = h - c.kernel_h + 1, ow = w - c.kernel_w + 1;
  for (std::size_t o = 0; o < c.out_channels; ++o) {
    for (std::size_t r = 0; r < oh; ++r) {
      for (std::size_t s = 0; s < ow; ++s) {
        double acc = c.bias[o];
        for (std::size_t ic = 0; ic < c.in_channels; ++ic) {
          const double* k =
              c.weight.data() + ((o * c.in_channels + ic) * c.kernel_h) * c.kernel_w;
          const double* plane = x.data() + ic * h * w;
          for (std::size_t i = 0; i < c.kernel_h; ++i) {
            for (std::size_t j = 0; j < c.kernel_w; ++j) {
              acc += k[i * c.kernel_w + j] * plane[(r + i) * w + (s + j)];
            }
          }
        }
        y[(o * oh + r) * ow + s] = acc;
      }
    }
  }
}

// Returns, for every pooled cell, the flat index of the winning input.
inline std::vector<std::uint32_t> pool_forward(const Shape& in_shape,
                                               std::span<const double> x,
                                               std::span<double> y) {
  const std::size_t ch = in_shape[0], h = in_shape[1], w = in_shape[2];
  const std::size_t oh = h / 2, ow = w / 2;
  std::vector<std::uint32_t> winners(ch * oh * ow);
  for (std::size_t c = 0; c < ch; ++c) {
    for (std::size_t r = 0; r < oh; ++r) {
      for (std::size_t s = 0; s < ow; ++s) {
        std::size_t best = (c * h + 2 * r) * w + 2 * s;
        for (std::size_t i = 0; i < 2; ++i) {
          for (std::size_t j = 0; j < 2; ++j) {
            std::size_t idx = (c * h + 2 * r + i) * w + 2 * s + j;
            if (x[idx] > x[best]) best = idx;
          }
        }
        std::size_t out = (c * oh + r) * ow + s;
        y[out] = x[best];
        winners[out] = static_cast<std::uint32_t>(best);
      }
    }
  }
  return winners;
}

}  // namespace detail

// Parameter-gradient accumulator laid out like Network::parameters().
using ParamGrads = std::vector<std::vector<double>>;

class Network {
 public:
  Network() = default;
  Network(Shape input_shape, std::vector<Layer> layers)
      : input_shape_(std::move(input_shape)), layers_(std::move(layers)) {
    validate();
  }

  const Shape& input_shape() const { return input_shape_; }
  const std::vector<Layer>& layers() const { return layers_; }
  std::vector<Layer>& mutable_layers() { return layers_; }
  std::size_t class_count() const { return shapes_.back()[0]; }
  std::size_t input_size() const { return shape_size(input_shape_); }
  const std::vector<Shape>& activation_shapes() const { return shapes_; }

  // Re-derives activation shapes; call after mutating layers in place.
  void validate() {
    if (layers_.empty()) throw DimensionError("network has no layers");
    shapes_.assign(1, input_shape_);
    for (const Layer& layer : layers_) {
      shapes_.push_back(detail::layer_output_shape(layer, shapes_.back()));
    }
    if (shapes_.back().size() != 1) {
      throw DimensionError("network output must be a logits vector, got " +
                           shape_string(shapes_.back()));
    }
  }

  std::vector<std::span<double>> parameters() {
    std::vector<std::span<double>> out;
    for (Layer& layer : layers_) {
      if (auto* d = std::get_if<Dense>(&layer)) {
        out.emplace_back(d->weight);
        out.emplace_back(d->bias);
      } else if (auto* c = std::get_if<Conv2D>(&layer)) {
        out.emplace_back(c->weight);
        out.emplace_back(c->bias);
      }
    }
    return out;
  }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (const Layer& layer : layers_) {
      if (auto* d = std::get_if<Dense>(&layer)) n += d->weight.size() + d->bias.size();
      if (auto* c = std::get_if<Conv2D>(&layer)) n += c->weight.size() + c->bias.size();
    }
    return n;
  }

  ParamGrads zero_grads() const {
    ParamGrads g;
    for (const Layer& layer : layers_) {
      if (auto* d = std::get_if<Dense>(&layer)) {
        g.emplace_back(d->weight.size(), 0.0);
        g.emplace_back(d->bias.size(), 0.0);
      } else if (auto* c = std::get_if<Conv2D>(&layer)) {
        g.emplace_back(c->weight.size(), 0.0);
        g.emplace_back(c->bias.size(), 0.0);
      }
    }
    return g;
  }

  void check_input(const Tensor& x) const {
    if (x.shape() != input_shape_) {
      throw DimensionError("input shape " + shape_string(x.shape()) +
                           " does not match network input " +
                           shape_string(input_shape_));
    }
  }

  void check_class(std::size_t cls) const {
    if (cls >= class_count()) {
      throw DimensionError("class index " + std::to_string(cls) +
                           " out of range for " + std::to_string(class_count()) +
                           " classes");
    }
  }

  // Activations of every layer boundary, kept for the reverse pass.
  struct Trace {
    std::vector<std::vector<double>> acts;
    std::vector<std::vector<std::uint32_t>> pool_winners;
  };

  Trace trace(const Tensor& x) const {
    check_input(x);
    Trace t;
    t.acts.reserve(layers_.size() + 1);
    t.pool_winners.resize(layers_.size());
    t.acts.push_back(x.storage());
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      const std::vector<double>& in = t.acts.back();
      std::vector<double> out(shape_size(shapes_[l + 1]));
      std::visit(Overloaded{
                     [&](const Dense& d) { detail::dense_forward(d, in, out); },
                     [&](const Conv2D& c) {
                       detail::conv_forward(c, shapes_[l], in, out);
                     },
                     [&](const Relu&) {
                       for (std::size_t i = 0; i < in.size(); ++i)
                         out[i] = in[i] > 0.0 ? in[i] : 0.0;
                     },
                     [&](const MaxPool2x2&) {
                       t.pool_winners[l] = detail::pool_forward(shapes_[l], in, out);
                     },
                     [&](const Flatten&) { out = in; }},
                 layers_[l]);
      t.acts.push_back(std::move(out));
    }
    return t;
  }

  Tensor forward(const Tensor& x) const {
    Trace t = trace(x);
    return Tensor(shapes_.back(), std::move(t.acts.back()));
  }

  // Vector-Jacobian product: returns upstream^T * d logits / d x. When grads
  // is non-null, parameter gradients are accumulated into it as well.
  Tensor backward(const Trace& t, std::span<const double> upstream,
                  BackpropRule rule = BackpropRule::kPlain,
                  ParamGrads* grads = nullptr) const {
    if (upstream.size() != class_count()) {
      throw DimensionError("upstream gradient length mismatch");
    }
    std::vector<double> g(upstream.begin(), upstream.end());
    std::size_t param_slot = 2 * count_param_layers();
    for (std::size_t l = layers_.size(); l-- > 0;) {
      const std::vector<double>& in = t.acts[l];
      std::vector<double> gin(in.size(), 0.0);
      std::visit(
          Overloaded{
              [&](const Dense& d) {
                param_slot -= 2;
                for (std::size_t o = 0; o < d.out; ++o) {
                  const double go = g[o];
                  if (go == 0.0) continue;
                  const double* w = d.weight.data() + o * d.in;
                  for (std::size_t i = 0; i < d.in; ++i) gin[i] += w[i] * go;
                }
                if (grads) {
                  auto& gw = (*grads)[param_slot];
                  auto& gb = (*grads)[param_slot + 1];
                  for (std::size_t o = 0; o < d.out; ++o) {
                    const double go = g[o];
                    gb[o] += go;
                    if (go == 0.0) continue;
                    double* row = gw.data() + o * d.in;
                    for (std::size_t i = 0; i < d.in; ++i) row[i] += go * in[i];
                  }
                }
              },
              [&](const Conv2D& c) {
                param_slot -= 2;
                const Shape& is = shapes_[l];
                const std::size_t h = is[1], w = is[2];
                const std::size_t oh = h - c.kernel_h + 1, ow = w - c.kernel_w + 1;
                for (std::size_t o = 0; o < c.out_channels; ++o) {
                  for (std::size_t r = 0; r < oh; ++r) {
                    for (std::size_t s = 0; s < ow; ++s) {
                      const double go = g[(o * oh + r) * ow + s];
                      if (go == 0.0) continue;
                      if (grads) (*grads)[param_slot + 1][o] += go;
                      for (std::size_t ic = 0; ic < c.in_channels; ++ic) {
                        const std::size_t kbase =
                            ((o * c.in_channels + ic) * c.kernel_h) * c.kernel_w;
                        const std::size_t pbase = ic * h * w;
                        for (std::size_t i = 0; i < c.kernel_h; ++i) {
                          for (std::size_t j = 0; j < c.kernel_w; ++j) {
                            const std::size_t xi = pbase + (r + i) * w + (s + j);
                            const std::size_t ki = kbase + i * c.kernel_w + j;
                            gin[xi] += c.weight[ki] * go;
                            if (grads) (*grads)[param_slot][ki] += in[xi] * go;
                          }
                        }
                      }
                    }
                  }
                }
              },
              [&](const Relu&) {
                for (std::size_t i = 0; i < in.size(); ++i) {
                  if (in[i] <= 0.0) continue;
                  if (rule == BackpropRule::kGuided && g[i] < 0.0) continue;
                  gin[i] = g[i];
                }
              },
              [&](const MaxPool2x2&) {
                const auto& winners = t.pool_winners[l];
                for (std::size_t i = 0; i < winners.size(); ++i) gin[winners[i]] += g[i];
              },
              [&](const Flatten&) { gin = g; }},
          layers_[l]);
      g = std::move(gin);
    }
    return Tensor(input_shape_, std::move(g));
  }

 private:
  std::size_t count_param_layers() const {
    std::size_t n = 0;
    for (const Layer& layer : layers_) {
      if (std::holds_alternative<Dense>(layer) || std::holds_alternative<Conv2D>(layer))
        ++n;
    }
    return n;
  }

  Shape input_shape_;
  std::vector<Layer> layers_;
  std::vector<Shape> shapes_;
};

inline Tensor forward(const Network& net, const Tensor& x) { return net.forward(x); }

// d logits[cls] / d x.
inline Tensor input_gradient(const Network& net, const Tensor& x, std::size_t cls) {
  net.check_class(cls);
  std::vector<double> onehot(net.class_count(), 0.0);
  onehot[cls] = 1.0;
  return net.backward(net.trace(x), onehot);
}

inline Tensor guided_input_gradient(const Network& net, const Tensor& x,
                                    std::size_t cls) {
  net.check_class(cls);
  std::vector<double> onehot(net.class_count(), 0.0);
  onehot[cls] = 1.0;
  return net.backward(net.trace(x), onehot, BackpropRule::kGuided);
}

// upstream^T * J_logits(x).
inline Tensor vector_jacobian(const Network& net, const Tensor& x,
                              std::span<const double> upstream) {
  return net.backward(net.trace(x), upstream);
}

inline std::size_t argmax(std::span<const double> v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

inline std::size_t predict(const Network& net, const Tensor& x) {
  return argmax(net.forward(x).values());
}

// Uniform [-1/sqrt(fan_in), 1/sqrt(fan_in)] for weights and biases alike.
inline void initialize(Network& net, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (Layer& layer : net.mutable_layers()) {
    auto fill = [&](std::vector<double>& v, double bound) {
      std::uniform_real_distribution<double> dist(-bound, bound);
      for (double& x : v) x = dist(rng);
    };
    if (auto* d = std::get_if<Dense>(&layer)) {
      double b = 1.0 / std::sqrt(static_cast<double>(d->in));
      fill(d->weight, b);
      fill(d->bias, b);
    } else if (auto* c = std::get_if<Conv2D>(&layer)) {
      double b = 1.0 / std::sqrt(static_cast<double>(c->in_channels * c->kernel_h *
                                                     c->kernel_w));
      fill(c->weight, b);
      fill(c->bias, b);
    }
  }
}

// Dense-ReLU stack ending in a logits layer.
inline Network make_mlp(const Shape& input_shape, const std::vector<std::size_t>& hidden,
                        std::size_t classes, std::uint64_t seed) {
  std::vector<Layer> layers;
  if (input_shape.size() != 1) layers.emplace_back(Flatten{});
  std::size_t width = shape_size(input_shape);
  for (std::size_t h : hidden) {
    layers.emplace_back(make_dense(width, h));
    layers.emplace_back(Relu{});
    width = h;
  }
  layers.emplace_back(make_dense(width, classes));
  Network net(input_shape, std::move(layers));
  initialize(net, seed);
  return net;
}

struct CnnShape {
  std::size_t conv_channels = 6;
  std::size_t kernel = 3;
  std::size_t hidden = 32;
};

// conv-relu-pool-flatten-dense-relu-dense over a CHW input.
inline Network make_cnn(const Shape& input_shape, std::size_t classes,
                        const CnnShape& arch, std::uint64_t seed) {
  if (input_shape.size() != 3) throw DimensionError("cnn expects a CHW input shape");
  std::vector<Layer> layers;
  layers.emplace_back(make_conv(input_shape[0], arch.conv_channels, arch.kernel,
                                arch.kernel));
  layers.emplace_back(Relu{});
  layers.emplace_back(MaxPool2x2{});
  layers.emplace_back(Flatten{});
  std::size_t oh = (input_shape[1] - arch.kernel + 1) / 2;
  std::size_t ow = (input_shape[2] - arch.kernel + 1) / 2;
  layers.emplace_back(make_dense(arch.conv_channels * oh * ow, arch.hidden));
  layers.emplace_back(Relu{});
  layers.emplace_back(make_dense(arch.hidden, classes));
  Network net(input_shape, std::move(layers));
  initialize(net, seed);
  return net;
}

}  // namespace maxent
