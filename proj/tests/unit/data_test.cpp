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

#include <fstream>
#include <sstream>

#include "fixtures.hpp"

namespace maxent {
namespace {

TEST(ToyTest, LabelExamples) {
  ToySpec s{3, 2, 3};
  std::vector<double> a{1, 1, 0}, b{0, 1, 1}, c{0, 0, 1};
  EXPECT_EQ(toy_label(s, a), 2u);
  EXPECT_EQ(toy_label(s, b), 1u);
  EXPECT_EQ(toy_label(s, c), 0u);
  ToySpec x{2, 1, 2};
  std::vector<double> d{1, 0};
  EXPECT_EQ(toy_label(x, d), 1u);
}

TEST(ToyTest, RejectsUnrealizableClassCount) {
  EXPECT_THROW(validate(ToySpec{2, 1, 3}), SpecError);
  EXPECT_THROW(validate(ToySpec{2, 3, 2}), SpecError);
  EXPECT_NO_THROW(validate(ToySpec{4, 2, 4}));
}

TEST(ToyTest, GenerateProducesConsistentLabelsAndMask) {
  ToySpec s{4, 2, 3, 2, 1000, 5};
  auto [ds, mask] = toy_generate(s);
  EXPECT_EQ(mask.mask, (std::vector<int>{1, 1, 0, 0}));
  EXPECT_EQ(ds.size(), 1000u);
  EXPECT_EQ(ds.train_indices.size(), 800u);
  EXPECT_EQ(ds.test_indices.front(), 800u);
  EXPECT_EQ(ds.value_range, (ValueRange{0, 1}));
  for (std::size_t n = 0; n < ds.size(); ++n) {
    EXPECT_EQ(ds.labels[n], toy_label(s, ds.instances[n].values()));
  }
  auto [again, unused] = toy_generate(s);
  EXPECT_EQ(again.instances[17], ds.instances[17]);
}

// Flipping an irrelevant feature never changes the label; every relevant
// feature changes it for some instance.
TEST(ToyTest, ExhaustiveFlipEnumeration) {
  for (std::size_t f : {2, 3, 4}) {
    for (auto [k, c] : std::vector<std::pair<std::size_t, std::size_t>>{
             {1, 2}, {2, 2}, {2, 3}, {2, 4}}) {
      ToySpec s{f, k, c};
      auto all = toy_all_instances(s);
      ASSERT_EQ(all.size(), std::size_t{1} << f);
      std::vector<bool> matters(f, false);
      for (const Tensor& x : all) {
        for (std::size_t i = 0; i < f; ++i) {
          Tensor y = x;
          y[i] = 1.0 - y[i];
          if (toy_label(s, x.values()) != toy_label(s, y.values())) matters[i] = true;
        }
      }
      for (std::size_t i = 0; i < f; ++i) EXPECT_EQ(matters[i], i < k) << f << k << c;
    }
  }
}

TEST(ToyTest, AllInstancesLexicographic) {
  auto all = toy_all_instances(ToySpec{3, 1, 2});
  EXPECT_EQ(all[1], Tensor::vector({0, 0, 1}));
  EXPECT_EQ(all[6], Tensor::vector({1, 1, 0}));
}

TEST(NormalizeTest, ByteRangeExamples) {
  LabeledDataset ds;
  ds.sample_shape = {3};
  ds.instances = {Tensor::vector({0.0, 255.0, 127.5})};
  ds.labels = {0};
  ds.value_range = {0, 255};
  LabeledDataset n = normalize(ds, {-0.42, 2.82});
  EXPECT_NEAR(n.instances[0][0], -0.42, 1e-12);
  EXPECT_NEAR(n.instances[0][1], 2.82, 1e-12);
  EXPECT_NEAR(n.instances[0][2], 1.2, 1e-12);
  Tensor back = denormalize(n, n.instances[0]);
  EXPECT_LT(max_abs_diff(back, ds.instances[0]), 1e-12);
}

TEST(NormalizeTest, DegenerateRangeThrows) {
  LabeledDataset ds;
  ds.value_range = {1, 1};
  EXPECT_THROW(normalize(ds, {0, 1}), DataError);
}

TEST(NormalizeTest, ComposesAcrossCalls) {
  LabeledDataset ds;
  ds.sample_shape = {1};
  ds.instances = {Tensor::vector({51.0})};
  ds.labels = {0};
  ds.value_range = {0, 255};
  LabeledDataset twice = normalize(normalize(ds, {0, 1}), {-1, 1});
  EXPECT_NEAR(twice.instances[0][0], -0.6, 1e-12);
  EXPECT_NEAR(denormalize(twice, twice.instances[0])[0], 51.0, 1e-12);
}

TEST(CsvTest, HeaderAndRows) {
  auto [ds, m] = toy_generate(ToySpec{2, 1, 2, 2, 3, 0});
  std::ostringstream os;
  write_csv(os, ds);
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  EXPECT_EQ(header, "f0,f1,label");
  int rows = 0;
  for (std::string line; std::getline(is, line);) ++rows;
  EXPECT_EQ(rows, 3);
}

TEST(GlyphTest, BalancedSeededAndInRange) {
  GlyphSpec spec{200, 14, 3};
  LabeledDataset a = glyph_generate(spec), b = glyph_generate(spec);
  EXPECT_EQ(a.sample_shape, (Shape{1, 14, 14}));
  EXPECT_EQ(a.class_count, 10u);
  std::vector<int> counts(10, 0);
  for (std::size_t n = 0; n < a.size(); ++n) {
    ++counts[a.labels[n]];
    EXPECT_GE(a.instances[n].min(), 0.0);
    EXPECT_LE(a.instances[n].max(), 255.0);
    EXPECT_EQ(a.instances[n], b.instances[n]);
  }
  for (int c : counts) EXPECT_EQ(c, 20);
  GlyphSpec other = spec;
  other.seed = 4;
  EXPECT_NE(glyph_generate(other).instances[0], a.instances[0]);
}

}  // namespace
}  // namespace maxent
