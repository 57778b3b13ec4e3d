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

// IDX container (the MNIST distribution format). All integers big-endian.
//   images: magic 0x00000803, count, rows, cols, then count*rows*cols bytes
//   labels: magic 0x00000801, count, then count bytes

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "maxent/data.hpp"
#include "maxent/tensor.hpp"

namespace maxent {

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

struct IdxImages {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Tensor> images;  // each 1 x rows x cols, values in [0,255]
};

namespace detail {

inline std::uint32_t read_be32(std::span<const std::uint8_t> bytes, std::size_t at) {
  if (at + 4 > bytes.size()) throw DataError("idx: truncated header");
  return (std::uint32_t{bytes[at]} << 24) | (std::uint32_t{bytes[at + 1]} << 16) |
         (std::uint32_t{bytes[at + 2]} << 8) | std::uint32_t{bytes[at + 3]};
}

inline void write_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

inline std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& path,
                       const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

}  // namespace detail

inline IdxImages parse_idx_images(std::span<const std::uint8_t> bytes) {
  std::uint32_t magic = detail::read_be32(bytes, 0);
  if (magic != kIdxImageMagic) throw DataError("idx: bad image magic");
  std::size_t count = detail::read_be32(bytes, 4);
  IdxImages out;
  out.rows = detail::read_be32(bytes, 8);
  out.cols = detail::read_be32(bytes, 12);
  const std::size_t pixels = out.rows * out.cols;
  if (bytes.size() < 16 + count * pixels) throw DataError("idx: truncated image data");
  out.images.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    Tensor img({1, out.rows, out.cols});
    const std::uint8_t* src = bytes.data() + 16 + n * pixels;
    for (std::size_t i = 0; i < pixels; ++i) img[i] = src[i];
    out.images.push_back(std::move(img));
  }
  return out;
}

inline std::vector<std::size_t> parse_idx_labels(std::span<const std::uint8_t> bytes) {
  std::uint32_t magic = detail::read_be32(bytes, 0);
  if (magic != kIdxLabelMagic) throw DataError("idx: bad label magic");
  std::size_t count = detail::read_be32(bytes, 4);
  if (bytes.size() < 8 + count) throw DataError("idx: truncated label data");
  return {bytes.begin() + 8, bytes.begin() + 8 + static_cast<std::ptrdiff_t>(count)};
}

inline IdxImages load_idx_images(const std::filesystem::path& path) {
  auto bytes = detail::read_file(path);
  return parse_idx_images(bytes);
}

inline std::vector<std::size_t> load_idx_labels(const std::filesystem::path& path) {
  auto bytes = detail::read_file(path);
  return parse_idx_labels(bytes);
}

// Pairs an image file with its label file; raw [0,255] values, 80/20 split.
inline LabeledDataset load_idx_dataset(const std::filesystem::path& images,
                                       const std::filesystem::path& labels) {
  IdxImages imgs = load_idx_images(images);
  std::vector<std::size_t> lab = load_idx_labels(labels);
  if (imgs.images.size() != lab.size()) {
    throw DataError("idx: image count " + std::to_string(imgs.images.size()) +
                    " does not match label count " + std::to_string(lab.size()));
  }
  LabeledDataset ds;
  ds.sample_shape = {1, imgs.rows, imgs.cols};
  ds.instances = std::move(imgs.images);
  ds.labels = std::move(lab);
  ds.class_count =
      ds.labels.empty() ? 0 : *std::max_element(ds.labels.begin(), ds.labels.end()) + 1;
  ds.value_range = {0.0, 255.0};
  split_80_20(ds);
  return ds;
}

inline std::vector<std::uint8_t> encode_idx_images(const std::vector<Tensor>& images,
                                                   std::size_t rows, std::size_t cols) {
  std::vector<std::uint8_t> out;
  out.reserve(16 + images.size() * rows * cols);
  detail::write_be32(out, kIdxImageMagic);
  detail::write_be32(out, static_cast<std::uint32_t>(images.size()));
  detail::write_be32(out, static_cast<std::uint32_t>(rows));
  detail::write_be32(out, static_cast<std::uint32_t>(cols));
  for (const Tensor& img : images) {
    if (img.size() != rows * cols) throw DimensionError("idx: image size mismatch");
    for (double v : img) {
      out.push_back(static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)));
    }
  }
  return out;
}

inline std::vector<std::uint8_t> encode_idx_labels(const std::vector<std::size_t>& labels) {
  std::vector<std::uint8_t> out;
  out.reserve(8 + labels.size());
  detail::write_be32(out, kIdxLabelMagic);
  detail::write_be32(out, static_cast<std::uint32_t>(labels.size()));
  for (std::size_t l : labels) out.push_back(static_cast<std::uint8_t>(l));
  return out;
}

inline void write_idx_images(const std::filesystem::path& path,
                             const std::vector<Tensor>& images, std::size_t rows,
                             std::size_t cols) {
  detail::write_file(path, encode_idx_images(images, rows, cols));
}

inline void write_idx_labels(const std::filesystem::path& path,
                             const std::vector<std::size_t>& labels) {
  detail::write_file(path, encode_idx_labels(labels));
}

}  // namespace maxent
