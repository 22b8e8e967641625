#include <gtest/gtest.h>

#include <cmath>

#include "dseqmark/attacks.hpp"
#include "dseqmark/metrics.hpp"
#include "support.hpp"

using namespace dseqmark;
using testing_support::code_of;

namespace {

const GrayImage& photo() {
  static const GrayImage img = load_image(testing_support::data_path("photo_launch.pgm"));
  return img;
}

// IJG quality scaling written out independently.
int ijg_entry(int base, int quality) {
  const int scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;
  const long v = std::lround(base * scale / 100.0);
  return static_cast<int>(std::clamp(v, 1L, 255L));
}

}  // namespace

TEST(Attacks, ParseAndFormat) {
  const auto j = AttackSpec::parse("jpeg:q=45");
  EXPECT_EQ(j.kind, AttackKind::Jpeg);
  EXPECT_EQ(j.quality, 45);
  const auto g = AttackSpec::parse("gauss:var=2%:seed=1");
  EXPECT_EQ(g.kind, AttackKind::GaussianNoise);
  EXPECT_DOUBLE_EQ(g.variance_pct, 2.0);
  EXPECT_EQ(g.seed, 1u);
  EXPECT_DOUBLE_EQ(AttackSpec::parse("gauss:sigma=5").sigma, 5.0);
  EXPECT_DOUBLE_EQ(AttackSpec::parse("saltpepper:d=0.05:seed=1").density, 0.05);
  EXPECT_EQ(AttackSpec::parse("median:w=3").window, 3);
  EXPECT_DOUBLE_EQ(AttackSpec::parse("sharpen:s=1.0").strength, 1.0);
  for (const char* s : {"jpeg:q=45", "gauss:var=2%:seed=1", "saltpepper:d=0.05:seed=7", "median:w=5", "sharpen:s=0.5"}) {
    const auto spec = AttackSpec::parse(s);
    const auto again = AttackSpec::parse(spec.to_string());
    EXPECT_EQ(again.to_string(), spec.to_string()) << s;
  }
}

TEST(Attacks, ParseErrors) {
  EXPECT_EQ(code_of([] { AttackSpec::parse("rotate:deg=5"); }), ErrorCode::InvalidAttackSpec);
  EXPECT_EQ(code_of([] { AttackSpec::parse("jpeg:q=abc"); }), ErrorCode::InvalidAttackSpec);
  EXPECT_EQ(code_of([] { AttackSpec::parse("jpeg:q=0").validate(); }), ErrorCode::QualityOutOfRange);
  EXPECT_EQ(code_of([] { AttackSpec::parse("jpeg:q=101").validate(); }), ErrorCode::QualityOutOfRange);
  EXPECT_EQ(code_of([] { median_filter(GrayImage(8, 8), 4); }), ErrorCode::EvenWindow);
  EXPECT_EQ(code_of([] { jpeg_attack(GrayImage(8, 8), 0); }), ErrorCode::QualityOutOfRange);
}

TEST(Attacks, QuantTableMatchesIjgScaling) {
  for (int q : {1, 10, 30, 45, 50, 75, 90, 100}) {
    const auto t = jpeg_quant_table(q);
    for (int i = 0; i < 64; ++i) EXPECT_EQ(t[i], ijg_entry(kJpegLuminanceTable[i], q)) << "q=" << q << " i=" << i;
  }
  EXPECT_EQ(jpeg_quant_table(50), kJpegLuminanceTable);
  for (int v : jpeg_quant_table(100)) EXPECT_EQ(v, 1);
}

TEST(Attacks, JpegHighQualityNearIdentity) {
  EXPECT_GT(psnr(photo(), jpeg_attack(photo(), 100).attacked), 50.0);
}

TEST(Attacks, JpegQualityMonotone) {
  double prev = std::numeric_limits<double>::infinity();
  for (int q : {95, 75, 50, 45, 40, 35, 30, 10}) {
    const double p = psnr(photo(), jpeg_attack(photo(), q).attacked);
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, prev + 0.1) << q;
    prev = p;
  }
}

TEST(Attacks, JpegNonAlignedRejected) {
  EXPECT_EQ(code_of([] { jpeg_attack(GrayImage(12, 8), 50); }), ErrorCode::DimensionsNotBlockAligned);
}

TEST(Attacks, GaussianNoise) {
  const GrayImage flat(256, 256, 128);
  EXPECT_EQ(gaussian_noise(flat, 0.0, 1).attacked, flat);
  const auto a = gaussian_noise(flat, 0.1, 5);
  const auto b = gaussian_noise(flat, 0.1, 5);
  EXPECT_EQ(a.attacked, b.attacked);
  EXPECT_NE(a.attacked, gaussian_noise(flat, 0.1, 6).attacked);
  // variance = 0.1% of 255^2 = 65.025, plus rounding 1/12
  EXPECT_NEAR(mse(flat, a.attacked), 65.025 + 1.0 / 12.0, 4.0);
  EXPECT_NEAR(mse(flat, gaussian_noise_sigma(flat, 5.0, 3).attacked), 25.0 + 1.0 / 12.0, 2.0);
}

TEST(Attacks, SaltPepper) {
  const GrayImage flat(200, 200, 128);
  EXPECT_EQ(salt_pepper(flat, 0.0, 1).attacked, flat);
  const GrayImage full = salt_pepper(flat, 1.0, 1).attacked;
  for (auto v : full.samples()) EXPECT_TRUE(v == 0 || v == 255);

  const auto r = salt_pepper(flat, 0.05, 9);
  const double n = static_cast<double>(flat.size());
  double hit = 0;
  double salt = 0;
  for (auto v : r.attacked.samples()) {
    hit += v != 128 ? 1 : 0;
    salt += v == 255 ? 1 : 0;
  }
  const double sigma = std::sqrt(n * 0.05 * 0.95);
  EXPECT_NEAR(hit, 0.05 * n, 3 * sigma);
  EXPECT_NEAR(salt / hit, 0.5, 0.05);
  EXPECT_EQ(r.attacked, salt_pepper(flat, 0.05, 9).attacked);
}

TEST(Attacks, MedianFilter) {
  const GrayImage flat(32, 32, 60);
  EXPECT_EQ(median_filter(flat, 3).attacked, flat);
  GrayImage salted = flat;
  salted.at(10, 10) = 255;
  salted.at(0, 0) = 255;  // corner with replicated border
  EXPECT_EQ(median_filter(salted, 3).attacked, flat);
  EXPECT_EQ(median_filter(salted, 5).attacked, flat);
}

TEST(Attacks, Sharpen) {
  const GrayImage step = testing_support::vertical_step(32, 8, 80, 160);
  EXPECT_EQ(sharpen(step, 0.0).attacked, step);
  const GrayImage s = sharpen(step, 1.0).attacked;
  EXPECT_LT(s.at(15, 4), 80);   // undershoot on the dark side
  EXPECT_GT(s.at(16, 4), 160);  // overshoot on the bright side
  EXPECT_EQ(s.at(3, 4), 80);
  EXPECT_EQ(s.at(28, 4), 160);
}

TEST(Attacks, DimensionsPreserved) {
  const GrayImage img = testing_support::random_image(48, 40, 3);
  for (const char* spec : {"jpeg:q=30", "gauss:var=2%:seed=1", "saltpepper:d=0.1:seed=2", "median:w=3", "sharpen:s=2"}) {
    const auto r = apply_attack(img, AttackSpec::parse(spec));
    EXPECT_EQ(r.attacked.width(), 48) << spec;
    EXPECT_EQ(r.attacked.height(), 40) << spec;
  }
}
