#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dseqmark/features.hpp"
#include "support.hpp"

using namespace dseqmark;
using testing_support::code_of;
using testing_support::data_path;

namespace {

DetectorChoice canny() { return DetectorChoice::parse("gradient-hysteresis"); }
DetectorChoice pc() { return DetectorChoice::parse("phase-congruency"); }

// Rectangles of different grey levels on a mid-grey field.
GrayImage step_card() {
  GrayImage img(128, 128, 120);
  auto fill = [&](int x0, int y0, int x1, int y1, std::uint8_t v) {
    for (int y = y0; y < y1; ++y) {
      for (int x = x0; x < x1; ++x) img.at(x, y) = v;
    }
  };
  fill(16, 16, 60, 60, 60);
  fill(72, 20, 112, 100, 180);
  fill(24, 76, 56, 112, 200);
  return img;
}

GrayImage affine(const GrayImage& img, double a, double b) {
  GrayImage out = img;
  for (auto& v : out.samples()) v = static_cast<std::uint8_t>(std::clamp(std::round(a * v + b), 0.0, 255.0));
  return out;
}

GrayImage disk(int size, double cx, double cy, double r) {
  GrayImage img(size, size, 40);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      if (std::hypot(x - cx, y - cy) <= r) img.at(x, y) = 210;
    }
  }
  return img;
}

}  // namespace

TEST(Features, DetectorParsing) {
  EXPECT_EQ(DetectorChoice::parse("pc").kind, EdgeDetectorKind::PhaseCongruency);
  EXPECT_EQ(DetectorChoice::parse("canny").kind, EdgeDetectorKind::GradientHysteresis);
  EXPECT_EQ(DetectorChoice{}.kind, EdgeDetectorKind::PhaseCongruency);
  EXPECT_EQ(code_of([] { DetectorChoice::parse("sobel"); }), ErrorCode::InvalidDetectorParameters);
}

TEST(Features, InvalidParametersRejected) {
  DetectorChoice d = canny();
  d.gradient.low_ratio = 0.5;
  d.gradient.high_ratio = 0.2;
  EXPECT_EQ(code_of([&] { detect_edges(GrayImage(16, 16), d); }), ErrorCode::InvalidDetectorParameters);
  DetectorChoice p = pc();
  p.phase.scales = 1;
  EXPECT_EQ(code_of([&] { detect_edges(GrayImage(16, 16), p); }), ErrorCode::InvalidDetectorParameters);
  CssParams css;
  css.max_angle_deg = 200;
  EXPECT_EQ(code_of([&] { css.validate(); }), ErrorCode::InvalidDetectorParameters);
}

TEST(Features, ConstantImageHasNoEdges) {
  const GrayImage img(64, 64, 90);
  EXPECT_EQ(detect_edges(img, canny()).count(), 0u);
  EXPECT_EQ(detect_edges(img, pc()).count(), 0u);
}

TEST(Features, VerticalStepLocalized) {
  const GrayImage img = testing_support::vertical_step(64, 64, 64, 192);
  for (const auto& choice : {canny(), pc()}) {
    const EdgeMap e = detect_edges(img, choice);
    EXPECT_GT(e.count(), 0u) << to_string(choice.kind);
    for (int y = 0; y < 64; ++y) {
      for (int x = 0; x < 64; ++x) {
        if (e.at(x, y)) {
          EXPECT_TRUE(x == 31 || x == 32) << to_string(choice.kind) << " at " << x << "," << y;
        }
      }
    }
    // The boundary is found on every row.
    for (int y = 0; y < 64; ++y) EXPECT_TRUE(e.at(31, y) || e.at(32, y)) << to_string(choice.kind) << " row " << y;
  }
}

TEST(Features, ContrastInvarianceOnStepCard) {
  const GrayImage card = step_card();
  for (const auto& choice : {canny(), pc()}) {
    const EdgeMap ref = detect_edges(card, choice);
    ASSERT_GT(ref.count(), 100u);
    for (double a : {0.8, 1.0, 1.2}) {
      for (double b : {-20.0, 0.0, 20.0}) {
        EXPECT_EQ(detect_edges(affine(card, a, b), choice), ref) << to_string(choice.kind) << " a=" << a << " b=" << b;
      }
    }
  }
}

TEST(Features, Deterministic) {
  const GrayImage img = testing_support::smooth_random_image(64, 64, 4);
  EXPECT_EQ(detect_edges(img, pc()), detect_edges(img, pc()));
  const EdgeMap e = detect_edges(img, pc());
  EXPECT_EQ(detect_corners(img, e).points, detect_corners(img, e).points);
}

TEST(Features, SquareHasFourCorners) {
  const GrayImage img = testing_support::filled_square(128, 32, 40, 56, 50, 200);
  const EdgeMap edges = detect_edges(img);
  const CornerMap corners = detect_corners(img, edges);
  ASSERT_EQ(corners.points.size(), 4u);
  const int vx[2] = {32, 32 + 55};
  const int vy[2] = {40, 40 + 55};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const bool found = std::any_of(corners.points.begin(), corners.points.end(), [&](const CornerPoint& p) {
        return std::abs(p.x - vx[i]) <= 2 && std::abs(p.y - vy[j]) <= 2;
      });
      EXPECT_TRUE(found) << "vertex " << vx[i] << "," << vy[j];
    }
  }
}

TEST(Features, CircleHasNoCorners) {
  const GrayImage img = disk(128, 64.0, 64.0, 40.0);
  const EdgeMap edges = detect_edges(img);
  ASSERT_GT(edges.count(), 100u);
  EXPECT_TRUE(detect_corners(img, edges).points.empty());
}

TEST(Features, EmptyEdgeMapGivesNoCorners) {
  const GrayImage img(32, 32, 10);
  EXPECT_TRUE(detect_corners(img, EdgeMap(32, 32)).points.empty());
  EXPECT_EQ(code_of([&] { detect_corners(img, EdgeMap(16, 32)); }), ErrorCode::GeometryMismatch);
}

TEST(Features, PhotoEdgeCountsAndCornerRegression) {
  const GrayImage img = load_image(data_path("photo_launch.pgm"));
  const EdgeMap e_pc = detect_edges(img, pc());
  const EdgeMap e_canny = detect_edges(img, canny());
  EXPECT_GE(static_cast<double>(e_pc.count()), 1.3 * static_cast<double>(e_canny.count()));

  const CornerMap corners = detect_corners(img, e_pc);
  // Frozen from the first validated run at default parameters.
  EXPECT_EQ(corners.points.size(), 272u);

  std::size_t near_edge = 0;
  for (const auto& p : corners.points) {
    EXPECT_TRUE(p.x >= 0 && p.y >= 0 && p.x < img.width() && p.y < img.height());
    bool hit = false;
    for (int dy = -1; dy <= 1 && !hit; ++dy) {
      for (int dx = -1; dx <= 1 && !hit; ++dx) {
        const int x = p.x + dx;
        const int y = p.y + dy;
        hit = x >= 0 && y >= 0 && x < img.width() && y < img.height() && e_pc.at(x, y);
      }
    }
    near_edge += hit ? 1 : 0;
  }
  EXPECT_GE(static_cast<double>(near_edge), 0.95 * static_cast<double>(corners.points.size()));
}

TEST(Features, ThinningLeavesOnePixelLines) {
  EdgeMap thick(32, 32);
  for (int y = 4; y < 28; ++y) {
    for (int x = 14; x < 18; ++x) thick.set(x, y, true);
  }
  const EdgeMap thin = thin_edges(thick);
  EXPECT_GT(thin.count(), 10u);
  for (int y = 0; y < 32; ++y) {
    int run = 0;
    for (int x = 0; x < 32; ++x) run += thin.at(x, y);
    EXPECT_LE(run, 1) << "row " << y;
  }
}

TEST(Features, BlockLuminance) {
  GrayImage img(16, 8, 128);
  for (int y = 0; y < 8; ++y) {
    for (int x = 8; x < 16; ++x) img.at(x, y) = ((x + y) % 2) ? 255 : 0;
  }
  EXPECT_DOUBLE_EQ(block_luminance(img, block_at(0, 2)), 128.0);
  EXPECT_DOUBLE_EQ(block_luminance(img, block_at(1, 2)), 127.5);
  EXPECT_DOUBLE_EQ(block_luminance(GrayImage(8, 8, 0), block_at(0, 1)), 0.0);
}

TEST(Features, LuminanceSensitivity) {
  const auto uniform = transform_image(GrayImage(16, 16, 77));
  for (double d : luminance_sensitivity_all(uniform)) EXPECT_NEAR(d, 1.0, 1e-12);

  // Blocks at 0, 100, 100, 200: mean DC corresponds to 100.
  GrayImage img(32, 8);
  const std::uint8_t levels[4] = {0, 100, 100, 200};
  for (int b = 0; b < 4; ++b) {
    for (int y = 0; y < 8; ++y) {
      for (int x = 0; x < 8; ++x) img.at(8 * b + x, y) = levels[b];
    }
  }
  const auto grid = transform_image(img);
  EXPECT_DOUBLE_EQ(luminance_sensitivity(grid, block_at(0, 4)), 0.0);
  EXPECT_NEAR(luminance_sensitivity(grid, block_at(1, 4)), 1.0, 1e-12);
  EXPECT_NEAR(luminance_sensitivity(grid, block_at(3, 4)), std::pow(2.0, 0.649), 1e-12);
  EXPECT_NEAR(std::pow(2.0, kLuminanceExponent), 1.568, 1e-3);
}
