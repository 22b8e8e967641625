#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include <unistd.h>

#include "dseqmark/error.hpp"
#include "dseqmark/imaging.hpp"
#include "support.hpp"

using namespace dseqmark;
namespace fs = std::filesystem;
using testing_support::data_path;
using testing_support::code_of;
using testing_support::random_image;

namespace {

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("dseqmark_imaging_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

void write_bytes(const fs::path& p, const std::string& bytes) {
  std::ofstream(p, std::ios::binary) << bytes;
}

}  // namespace

TEST(Imaging, BundledPhotoLoadsAs512Square) {
  const GrayImage img = load_image(data_path("photo_launch.pgm"));
  EXPECT_EQ(img.width(), 512);
  EXPECT_EQ(img.height(), 512);
  EXPECT_EQ(img.block_count(), 4096);
}

using ImagingIo = TempDir;

TEST_F(ImagingIo, AllZeroPgm) {
  write_bytes(dir_ / "z.pgm", "P5\n8 8\n255\n" + std::string(64, '\0'));
  const GrayImage img = load_image(dir_ / "z.pgm");
  ASSERT_EQ(img.width(), 8);
  for (auto v : img.samples()) EXPECT_EQ(v, 0);
}

TEST_F(ImagingIo, SixteenBitPgmRejected) {
  write_bytes(dir_ / "w.pgm", "P5\n8 8\n65535\n" + std::string(128, '\0'));
  EXPECT_EQ(code_of([&] { load_image(dir_ / "w.pgm"); }), ErrorCode::MaxvalNot255);
}

TEST_F(ImagingIo, PgmCommentsAreSkipped) {
  write_bytes(dir_ / "c.pgm", "P5\n# made by hand\n8 8\n# another\n255\n" + std::string(64, '\x07'));
  EXPECT_EQ(load_image(dir_ / "c.pgm").at(3, 3), 7);
}

TEST_F(ImagingIo, MissingFileIsUnreadable) {
  EXPECT_EQ(code_of([&] { load_image(dir_ / "nope.pgm"); }), ErrorCode::UnreadableFile);
}

TEST_F(ImagingIo, GarbageIsUnsupported) {
  write_bytes(dir_ / "g.pgm", "hello world, not an image");
  EXPECT_EQ(code_of([&] { load_image(dir_ / "g.pgm"); }), ErrorCode::UnsupportedFormat);
}

TEST_F(ImagingIo, RoundTripPgmAndPng) {
  const GrayImage img = random_image(64, 64, 11);
  for (const char* name : {"r.pgm", "r.png"}) {
    save_image(img, dir_ / name);
    EXPECT_EQ(load_image(dir_ / name), img) << name;
  }
}

TEST_F(ImagingIo, NonSquareRoundTrip) {
  const GrayImage img = random_image(24, 40, 5);
  save_image(img, dir_ / "n.png");
  EXPECT_EQ(load_image(dir_ / "n.png"), img);
}

TEST_F(ImagingIo, UnwritableDestination) {
  EXPECT_EQ(code_of([&] { save_image(random_image(8, 8, 1), dir_ / "missing" / "x.pgm"); }),
            ErrorCode::UnwritableDestination);
}

TEST_F(ImagingIo, UnknownExtensionRejected) {
  EXPECT_EQ(code_of([&] { save_image(random_image(8, 8, 1), dir_ / "x.bmp"); }), ErrorCode::UnsupportedFormat);
}

TEST_F(ImagingIo, WatermarkFromPbmP1AndP4) {
  const auto wm = testing_support::random_bitmap(13, 7, 3);
  save_watermark(wm, dir_ / "w.pbm");
  EXPECT_EQ(load_watermark(dir_ / "w.pbm"), wm);
  write_bytes(dir_ / "a.pbm", encode_pbm_ascii(wm));
  EXPECT_EQ(load_watermark(dir_ / "a.pbm"), wm);
}

TEST_F(ImagingIo, WatermarkFromImageBinarizesDarkToOne) {
  GrayImage img(4, 2, 255);
  img.at(0, 0) = 0;
  img.at(1, 0) = 127;
  img.at(2, 0) = 128;
  save_image(img, dir_ / "w.png");
  const auto wm = load_watermark(dir_ / "w.png");
  EXPECT_EQ(wm.at(0, 0), 1);
  EXPECT_EQ(wm.at(1, 0), 1);
  EXPECT_EQ(wm.at(2, 0), 0);
  EXPECT_EQ(wm.at(3, 1), 0);
}

TEST_F(ImagingIo, AllWhiteImageGivesZeroBits) {
  save_image(GrayImage(16, 16, 255), dir_ / "white.pgm");
  const auto wm = load_watermark(dir_ / "white.pgm");
  for (auto b : wm.bits()) EXPECT_EQ(b, 0);
}

TEST(Imaging, BundledWatermarks) {
  const auto w12 = load_watermark(data_path("wm_lsu_12x12.pbm"));
  EXPECT_EQ(w12.width(), 12);
  EXPECT_EQ(w12.height(), 12);
  const auto w64 = load_watermark(data_path("wm_lsu_64x64.pbm"));
  EXPECT_EQ(w64.size(), 4096u);
}

TEST(Imaging, EmptyBitmapRejected) {
  EXPECT_EQ(code_of([] { WatermarkBitmap(0, 3); }), ErrorCode::EmptyBitmap);
  EXPECT_EQ(code_of([] { WatermarkBitmap(2, 1, std::vector<std::uint8_t>{0, 2}); }), ErrorCode::InvalidArgument);
}

TEST(Imaging, PartitionCountsAndOrder) {
  const GrayImage img = random_image(512, 512, 2);
  const auto blocks = partition_blocks(img);
  ASSERT_EQ(blocks.size(), 4096u);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& b = blocks[i].index;
    EXPECT_EQ(b.linear, static_cast<int>(i));
    EXPECT_EQ(b.linear, b.row * 64 + b.col);
  }
  // Block (row 1, col 2) starts at pixel (16, 8).
  EXPECT_EQ(blocks[66].samples[0], img.at(16, 8));
  EXPECT_EQ(blocks[66].samples[63], img.at(23, 15));
}

TEST(Imaging, SingleBlockImage) {
  const GrayImage img = random_image(8, 8, 3);
  const auto blocks = partition_blocks(img);
  ASSERT_EQ(blocks.size(), 1u);
  EXPECT_TRUE(std::equal(blocks[0].samples.begin(), blocks[0].samples.end(), img.samples().begin()));
}

TEST(Imaging, NonAlignedRejected) {
  EXPECT_EQ(code_of([] { partition_blocks(GrayImage(12, 8)); }), ErrorCode::DimensionsNotBlockAligned);
}

TEST(Imaging, PartitionReassembleIsIdentity) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const GrayImage img = random_image(8 * static_cast<int>(seed + 1), 16, seed);
    const auto blocks = partition_blocks(img);
    EXPECT_EQ(assemble_blocks(blocks, img.width(), img.height()), img);
  }
}
