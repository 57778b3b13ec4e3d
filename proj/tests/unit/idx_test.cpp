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
#include <gtest/gtest.h>

#include "fixtures.hpp"

namespace maxent {
namespace {

TEST(IdxTest, ImageHeaderBytes) {
  std::vector<Tensor> imgs(2, Tensor({1, 2, 3}, 7.0));
  auto bytes = encode_idx_images(imgs, 2, 3);
  ASSERT_EQ(bytes.size(), 16u + 12u);
  const std::vector<std::uint8_t> header = {0, 0, 8, 3, 0, 0, 0, 2,
                                            0, 0, 0, 2, 0, 0, 0, 3};
  EXPECT_TRUE(std::equal(header.begin(), header.end(), bytes.begin()));
  EXPECT_EQ(bytes[16], 7);
}

TEST(IdxTest, LabelHeaderBytes) {
  auto bytes = encode_idx_labels({3, 1, 4});
  const std::vector<std::uint8_t> expect = {0, 0, 8, 1, 0, 0, 0, 3, 3, 1, 4};
  EXPECT_EQ(bytes, expect);
}

// 10000 images of 28x28: 16-byte header plus one byte per pixel.
TEST(IdxTest, FullSizeFileLength) {
  std::vector<Tensor> imgs(10000, Tensor({1, 28, 28}, 0.0));
  EXPECT_EQ(encode_idx_images(imgs, 28, 28).size(), 7840016u);
  EXPECT_EQ(encode_idx_labels(std::vector<std::size_t>(10000, 0)).size(), 10008u);
}

TEST(IdxTest, RoundTripThroughFiles) {
  auto dir = testing::scratch_dir("idx");
  GlyphSpec spec{30, 14, 1};
  LabeledDataset ds = glyph_generate(spec);
  write_idx_images(dir / "img.idx", ds.instances, 14, 14);
  write_idx_labels(dir / "lab.idx", ds.labels);
  LabeledDataset back = load_idx_dataset(dir / "img.idx", dir / "lab.idx");
  EXPECT_EQ(back.sample_shape, (Shape{1, 14, 14}));
  EXPECT_EQ(back.labels, ds.labels);
  EXPECT_EQ(back.class_count, 10u);
  EXPECT_EQ(back.value_range, (ValueRange{0, 255}));
  EXPECT_EQ(back.train_indices.size(), 24u);
  for (std::size_t n = 0; n < ds.size(); ++n) {
    for (std::size_t i = 0; i < ds.instances[n].size(); ++i) {
      EXPECT_EQ(back.instances[n][i], std::round(ds.instances[n][i]));
    }
  }
}

TEST(IdxTest, BadMagicThrows) {
  auto bytes = encode_idx_labels({1, 2});
  EXPECT_THROW(parse_idx_images(bytes), DataError);
  auto img = encode_idx_images({Tensor({1, 1, 1}, 1.0)}, 1, 1);
  EXPECT_THROW(parse_idx_labels(img), DataError);
}

TEST(IdxTest, TruncatedThrows) {
  auto bytes = encode_idx_images(std::vector<Tensor>(3, Tensor({1, 2, 2}, 1.0)), 2, 2);
  bytes.pop_back();
  EXPECT_THROW(parse_idx_images(bytes), DataError);
  std::vector<std::uint8_t> stub = {0, 0, 8};
  EXPECT_THROW(parse_idx_labels(stub), DataError);
}

TEST(IdxTest, CountMismatchThrows) {
  auto dir = testing::scratch_dir("idx_mismatch");
  write_idx_images(dir / "img.idx", std::vector<Tensor>(2, Tensor({1, 2, 2}, 0.0)), 2, 2);
  write_idx_labels(dir / "lab.idx", {0, 1, 2});
  EXPECT_THROW(load_idx_dataset(dir / "img.idx", dir / "lab.idx"), DataError);
  EXPECT_THROW(load_idx_images(dir / "missing.idx"), DataError);
}

}  // namespace
}  // namespace maxent
