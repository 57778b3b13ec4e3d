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
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "maxent/maxent.hpp"

namespace maxent::testing {

// Single Dense layer: logits = W x + b, W row-major (out x in).
inline Network linear_net(std::size_t in, std::size_t out, std::vector<double> w,
                          std::vector<double> b) {
  Dense d = make_dense(in, out);
  d.weight = std::move(w);
  d.bias = std::move(b);
  return Network({in}, {d});
}

inline Tensor random_tensor(const Shape& shape, std::uint64_t seed, double lo = -1.0,
                            double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(lo, hi);
  Tensor t(shape);
  for (double& v : t) v = d(rng);
  return t;
}

inline Network small_cnn(std::uint64_t seed) {
  return make_cnn({1, 6, 6}, 3, CnnShape{2, 3, 5}, seed);
}

// Central difference of logit `cls` with respect to every input coordinate.
inline Tensor fd_gradient(const Network& net, const Tensor& x, std::size_t cls,
                          double h = 1e-5) {
  Tensor g(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) {
    Tensor a = x, b = x;
    a[i] += h;
    b[i] -= h;
    g[i] = (net.forward(a)[cls] - net.forward(b)[cls]) / (2.0 * h);
  }
  return g;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("maxent_unit_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace maxent::testing
