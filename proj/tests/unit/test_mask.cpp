#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "dseqmark/mask.hpp"
#include "support.hpp"

using namespace dseqmark;
using testing_support::code_of;

namespace {

FeatureGrid single(double mt, double me, double mc, double ml) {
  FeatureGrid f;
  f.blocks_per_row = 1;
  f.blocks_per_col = 1;
  f.texture = {mt};
  f.edge = {me};
  f.corner = {mc};
  f.luminance = {ml};
  return f;
}

FeatureGrid random_grid(std::mt19937_64& rng, int bpr, int bpc) {
  std::uniform_real_distribution<double> u64(0.0, 64.0);
  std::uniform_real_distribution<double> u255(0.0, 255.0);
  FeatureGrid f;
  f.blocks_per_row = bpr;
  f.blocks_per_col = bpc;
  const auto n = static_cast<std::size_t>(bpr * bpc);
  for (std::size_t i = 0; i < n; ++i) {
    f.texture.push_back(u64(rng));
    f.edge.push_back(u64(rng));
    f.corner.push_back(u64(rng));
    f.luminance.push_back(u255(rng));
  }
  return f;
}

// A block whose raw E_AC is exactly `energy`: put sqrt(energy) in one AC slot.
CoefficientGrid grid_with_ac_energy(const std::vector<double>& energies) {
  CoefficientGrid g;
  g.blocks_per_row = static_cast<int>(energies.size());
  g.blocks_per_col = 1;
  for (std::size_t i = 0; i < energies.size(); ++i) {
    DctBlock b;
    b.origin = block_at(static_cast<int>(i), g.blocks_per_row);
    b.coeffs[0] = 1000.0;  // DC must not count
    b.coeffs[9] = std::sqrt(energies[i]);
    g.blocks.push_back(b);
  }
  return g;
}

}  // namespace

TEST(Mask, TextureFromLogEnergy) {
  const auto mt = texture_feature(grid_with_ac_energy({std::exp(10.0), std::exp(5.0), std::exp(5.0)}));
  EXPECT_NEAR(mt[0], 64.0, 1e-9);
  EXPECT_NEAR(mt[1], 32.0, 1e-9);
  EXPECT_NEAR(mt[2], 32.0, 1e-9);
}

TEST(Mask, TextureOfUniformImageIsZero) {
  for (double v : texture_feature(transform_image(GrayImage(32, 32, 200)))) EXPECT_EQ(v, 0.0);
  // Energy below 1 clamps to ln 1 = 0.
  const auto mt = texture_feature(grid_with_ac_energy({0.25, std::exp(2.0)}));
  EXPECT_EQ(mt[0], 0.0);
  EXPECT_NEAR(mt[1], 64.0, 1e-9);
}

TEST(Mask, EdgeFeatureCountsAndAnchors) {
  EdgeMap e(24, 8);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) e.set(x, y, true);
  }
  e.set(9, 3, true);
  const auto me = edge_feature(e);
  ASSERT_EQ(me.size(), 3u);
  EXPECT_DOUBLE_EQ(me[0], 64.0);
  EXPECT_DOUBLE_EQ(me[1], 1.0);
  EXPECT_DOUBLE_EQ(me[2], 0.0);

  EdgeMap even(16, 8);
  for (int k = 0; k < 5; ++k) {
    even.set(k, 0, true);
    even.set(8 + k, 1, true);
  }
  for (double v : edge_feature(even)) EXPECT_DOUBLE_EQ(v, 64.0);
  for (double v : edge_feature(EdgeMap(16, 16))) EXPECT_DOUBLE_EQ(v, 0.0);
}

TEST(Mask, StepImageEdgesStayInBoundaryColumn) {
  const GrayImage img = testing_support::vertical_step(64, 64, 64, 192);
  const auto me = edge_feature(detect_edges(img));
  for (int b = 0; b < 64; ++b) {
    const int col = b % 8;
    if (col == 3 || col == 4) continue;
    EXPECT_EQ(me[static_cast<std::size_t>(b)], 0.0) << b;
  }
}

TEST(Mask, CornerFeature) {
  CornerMap none{16, 16, {}};
  for (double v : corner_feature(none)) EXPECT_EQ(v, 0.0);
  CornerMap one{16, 16, {{9, 2}}};
  const auto mc = corner_feature(one);
  EXPECT_DOUBLE_EQ(mc[1], 64.0);
  EXPECT_DOUBLE_EQ(mc[0] + mc[2] + mc[3], 0.0);
}

TEST(Mask, SquareCornersLandInVertexBlocks) {
  const GrayImage img = testing_support::filled_square(128, 36, 44, 48, 50, 200);
  const auto corners = detect_corners(img, detect_edges(img));
  const auto mc = corner_feature(corners);
  for (const auto& p : corners.points) EXPECT_GT(mc[static_cast<std::size_t>((p.y / 8) * 16 + p.x / 8)], 0.0);
  EXPECT_EQ(std::count_if(mc.begin(), mc.end(), [](double v) { return v > 0.0; }), 4);
}

TEST(Mask, BuildMaskWorkedExamples) {
  EXPECT_DOUBLE_EQ(build_mask(single(64, 0, 0, 128)).raw[0], 64.0);
  EXPECT_DOUBLE_EQ(build_mask(single(0, 64, 64, 128)).raw[0], 0.0);
  EXPECT_DOUBLE_EQ(build_mask(single(32, 0, 0, 0)).raw[0], 96.0);
  EXPECT_DOUBLE_EQ(build_mask(single(32, 0, 0, 0), LuminanceMode::AdditiveCorrection, LuminanceScaling::Literal).raw[0],
                   32.0 + 128.0 * 128.0);
  // Multiplicative mode leaves luminance to the embedder.
  EXPECT_DOUBLE_EQ(build_mask(single(32, 0, 0, 0), LuminanceMode::MultiplicativeDL).raw[0], 32.0);
}

TEST(Mask, GeometryMismatch) {
  FeatureGrid f = single(1, 1, 1, 1);
  f.edge.push_back(0);
  EXPECT_EQ(code_of([&] { build_mask(f); }), ErrorCode::GeometryMismatch);
}

TEST(Mask, AllZeroRawGivesZeroNormalized) {
  const JndMask m = build_mask(single(0, 10, 0, 128));
  EXPECT_EQ(m.normalized[0], 0.0);
}

// Randomized property suite over feature grids.
TEST(MaskProperties, NonNegativeAndNormalized) {
  std::mt19937_64 rng(100);
  for (int t = 0; t < 200; ++t) {
    for (auto mode : {LuminanceMode::AdditiveCorrection, LuminanceMode::MultiplicativeDL}) {
      const JndMask m = build_mask(random_grid(rng, 8, 6), mode);
      const double mx = *std::max_element(m.raw.begin(), m.raw.end());
      for (std::size_t i = 0; i < m.size(); ++i) {
        ASSERT_GE(m.raw[i], 0.0);
        ASSERT_TRUE(std::isfinite(m.raw[i]));
        ASSERT_GE(m.normalized[i], 0.0);
        ASSERT_LE(m.normalized[i], 1.0);
      }
      if (mx > 0) {
        ASSERT_DOUBLE_EQ(*std::max_element(m.normalized.begin(), m.normalized.end()), 1.0);
      }
    }
  }
}

TEST(MaskProperties, MonotoneInTextureAntiMonotoneInEdgesAndCorners) {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> step(0.0, 20.0);
  for (int t = 0; t < 500; ++t) {
    FeatureGrid f = random_grid(rng, 4, 4);
    const auto i = static_cast<std::size_t>(rng() % f.size());
    const double base = build_mask(f).raw[i];

    FeatureGrid more_t = f;
    more_t.texture[i] += step(rng);
    ASSERT_GE(build_mask(more_t).raw[i], base);

    FeatureGrid more_e = f;
    more_e.edge[i] += step(rng);
    ASSERT_LE(build_mask(more_e).raw[i], base);

    FeatureGrid more_c = f;
    more_c.corner[i] += step(rng);
    ASSERT_LE(build_mask(more_c).raw[i], base);
  }
}

TEST(MaskProperties, LuminanceParabolaIsSymmetric) {
  std::mt19937_64 rng(102);
  // Block means are multiples of 1/64, so 128 +- d is exact.
  std::uniform_int_distribution<int> delta(0, 128 * 64);
  for (int t = 0; t < 500; ++t) {
    FeatureGrid f = random_grid(rng, 4, 4);
    const auto i = static_cast<std::size_t>(rng() % f.size());
    const double d = delta(rng) / 64.0;
    for (auto scaling : {LuminanceScaling::Scaled, LuminanceScaling::Literal}) {
      FeatureGrid up = f;
      FeatureGrid down = f;
      up.luminance[i] = 128.0 + d;
      down.luminance[i] = 128.0 - d;
      ASSERT_EQ(build_mask(up, LuminanceMode::AdditiveCorrection, scaling).raw[i],
                build_mask(down, LuminanceMode::AdditiveCorrection, scaling).raw[i]);
    }
    // Zero slope at mid-gray: the correction vanishes to second order.
    FeatureGrid mid = f;
    mid.luminance[i] = 128.0;
    FeatureGrid near = f;
    near.luminance[i] = 128.0 + 1e-4;
    ASSERT_NEAR(build_mask(mid).raw[i], build_mask(near).raw[i], 1e-9);
  }
}

TEST(Mask, PhotoMaskIsNormalizedAndFavoursTexture) {
  const GrayImage img = load_image(testing_support::data_path("photo_launch.pgm"));
  const auto grid = transform_image(img);
  const FeatureGrid f = extract_features(img, grid);
  const JndMask m = build_mask(f);
  EXPECT_DOUBLE_EQ(*std::max_element(m.normalized.begin(), m.normalized.end()), 1.0);
  // The most textured quarter of blocks carries more mask weight on average
  // than the least textured quarter.
  std::vector<std::size_t> order(m.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return f.texture[a] < f.texture[b]; });
  const std::size_t q = order.size() / 4;
  double low = 0.0;
  double high = 0.0;
  for (std::size_t k = 0; k < q; ++k) {
    low += m.normalized[order[k]];
    high += m.normalized[order[order.size() - 1 - k]];
  }
  EXPECT_GT(high, low);
}

TEST(Mask, RowDumpFormat) {
  JndMask m;
  m.blocks_per_row = 3;
  m.blocks_per_col = 2;
  m.raw = {1, 2, 3, 4, 5, 6};
  m.normalized = {1.0 / 6, 2.0 / 6, 0.5, 4.0 / 6, 5.0 / 6, 1.0};
  const int rows[] = {1, 0};
  EXPECT_EQ(format_mask_rows(m, rows),
            "block_col,row_1,row_0\n0,0.666667,0.166667\n1,0.833333,0.333333\n2,1.000000,0.500000\n");
  EXPECT_EQ(format_mask_rows(m, std::span<const int>{}), "block_col\n");
  const int bad[] = {2};
  EXPECT_EQ(code_of([&] { format_mask_rows(m, bad); }), ErrorCode::InvalidRow);
}

TEST(Mask, Row32OnPhotoHas64UnitValues) {
  const GrayImage img = load_image(testing_support::data_path("photo_launch.pgm"));
  const JndMask m = build_mask(extract_features(img, transform_image(img)));
  const int rows[] = {32};
  const std::string csv = format_mask_rows(m, rows);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 65);
  EXPECT_EQ(csv, format_mask_rows(m, rows));
  for (int c = 0; c < 64; ++c) {
    const double v = m.normalized[static_cast<std::size_t>(32 * 64 + c)];
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}
