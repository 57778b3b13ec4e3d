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

// Model file format, version 1 (plain text, one token stream):
//
//   maxent-model 1
//   input <rank> <d0> ... <dn>
//   layers <count>
//   dense <in> <out>          followed by "w" <in*out values> "b" <out values>
//   conv2d <ic> <oc> <kh> <kw> followed by "w" <oc*ic*kh*kw values> "b" <oc values>
//   relu | maxpool2x2 | flatten
//   end
//
// Values are C99 hexadecimal floats, so a save/load round trip is bit-exact.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "maxent/nn.hpp"

namespace maxent {

inline constexpr int kModelFormatVersion = 1;

namespace detail {

inline void write_values(std::ostream& os, const char* tag,
                         const std::vector<double>& v) {
  os << tag;
  char buf[40];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%a", v[i]);
    os << (i % 8 == 0 ? "\n  " : " ") << buf;
  }
  os << '\n';
}

inline std::string expect_token(std::istream& is) {
  std::string tok;
  if (!(is >> tok)) throw DataError("model file: unexpected end of input");
  return tok;
}

inline void expect_literal(std::istream& is, const std::string& lit) {
  std::string tok = expect_token(is);
  if (tok != lit) throw DataError("model file: expected '" + lit + "', got '" + tok + "'");
}

inline std::size_t read_size(std::istream& is) {
  std::string tok = expect_token(is);
  char* end = nullptr;
  unsigned long long v = std::strtoull(tok.c_str(), &end, 10);
  if (*end != '\0') throw DataError("model file: bad integer '" + tok + "'");
  return static_cast<std::size_t>(v);
}

inline void read_values(std::istream& is, const char* tag, std::vector<double>& v) {
  expect_literal(is, tag);
  for (double& x : v) {
    std::string tok = expect_token(is);
    char* end = nullptr;
    x = std::strtod(tok.c_str(), &end);
    if (*end != '\0') throw DataError("model file: bad number '" + tok + "'");
  }
}

}  // namespace detail

inline void save_model(std::ostream& os, const Network& net) {
  os << "maxent-model " << kModelFormatVersion << '\n';
  os << "input " << net.input_shape().size();
  for (std::size_t d : net.input_shape()) os << ' ' << d;
  os << "\nlayers " << net.layers().size() << '\n';
  for (const Layer& layer : net.layers()) {
    std::visit(Overloaded{[&](const Dense& d) {
                            os << "dense " << d.in << ' ' << d.out << '\n';
                            detail::write_values(os, "w", d.weight);
                            detail::write_values(os, "b", d.bias);
                          },
                          [&](const Conv2D& c) {
                            os << "conv2d " << c.in_channels << ' ' << c.out_channels
                               << ' ' << c.kernel_h << ' ' << c.kernel_w << '\n';
                            detail::write_values(os, "w", c.weight);
                            detail::write_values(os, "b", c.bias);
                          },
                          [&](const auto&) { os << layer_name(layer) << '\n'; }},
               layer);
  }
  os << "end\n";
}

inline Network load_model(std::istream& is) {
  detail::expect_literal(is, "maxent-model");
  if (detail::read_size(is) != kModelFormatVersion) {
    throw DataError("model file: unsupported format version");
  }
  detail::expect_literal(is, "input");
  Shape input(detail::read_size(is));
  for (std::size_t& d : input) d = detail::read_size(is);
  detail::expect_literal(is, "layers");
  std::size_t count = detail::read_size(is);
  std::vector<Layer> layers;
  for (std::size_t l = 0; l < count; ++l) {
    std::string kind = detail::expect_token(is);
    if (kind == "dense") {
      std::size_t in = detail::read_size(is), out = detail::read_size(is);
      Dense d = make_dense(in, out);
      detail::read_values(is, "w", d.weight);
      detail::read_values(is, "b", d.bias);
      layers.emplace_back(std::move(d));
    } else if (kind == "conv2d") {
      std::size_t ic = detail::read_size(is), oc = detail::read_size(is);
      std::size_t kh = detail::read_size(is), kw = detail::read_size(is);
      Conv2D c = make_conv(ic, oc, kh, kw);
      detail::read_values(is, "w", c.weight);
      detail::read_values(is, "b", c.bias);
      layers.emplace_back(std::move(c));
    } else if (kind == "relu") {
      layers.emplace_back(Relu{});
    } else if (kind == "maxpool2x2") {
      layers.emplace_back(MaxPool2x2{});
    } else if (kind == "flatten") {
      layers.emplace_back(Flatten{});
    } else {
      throw DataError("model file: unknown layer kind '" + kind + "'");
    }
  }
  detail::expect_literal(is, "end");
  return Network(std::move(input), std::move(layers));
}

inline void save_model(const std::filesystem::path& path, const Network& net) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw DataError("cannot write model file " + path.string());
  save_model(os, net);
}

inline Network load_model(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open model file " + path.string());
  return load_model(is);
}

}  // namespace maxent
