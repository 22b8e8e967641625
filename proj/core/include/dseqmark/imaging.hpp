#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace dseqmark {

inline constexpr int kBlockSize = 8;
inline constexpr int kBlockArea = kBlockSize * kBlockSize;

/// 8-bit luminance image, row-major.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(int width, int height, std::uint8_t fill = 0);
  GrayImage(int width, int height, std::vector<std::uint8_t> samples);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }

  std::uint8_t at(int x, int y) const { return samples_[index(x, y)]; }
  std::uint8_t& at(int x, int y) { return samples_[index(x, y)]; }

  std::span<const std::uint8_t> samples() const noexcept { return samples_; }
  std::span<std::uint8_t> samples() noexcept { return samples_; }

  bool block_aligned() const noexcept {
    return width_ % kBlockSize == 0 && height_ % kBlockSize == 0;
  }
  int blocks_per_row() const noexcept { return width_ / kBlockSize; }
  int blocks_per_col() const noexcept { return height_ / kBlockSize; }
  int block_count() const noexcept { return blocks_per_row() * blocks_per_col(); }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> samples_;
};

/// Position of an 8x8 block; `linear` is the row-major ordinal.
struct BlockIndex {
  int row = 0;
  int col = 0;
  int linear = 0;

  friend bool operator==(const BlockIndex&, const BlockIndex&) = default;
};

BlockIndex block_at(int linear, int blocks_per_row) noexcept;

using SampleBlock = std::array<std::uint8_t, kBlockArea>;

struct ImageBlock {
  BlockIndex index;
  SampleBlock samples;  // row-major within the block
};

/// Binary payload, row-major, every element 0 or 1.
class WatermarkBitmap {
 public:
  WatermarkBitmap() = default;
  WatermarkBitmap(int width, int height, std::uint8_t fill = 0);
  WatermarkBitmap(int width, int height, std::vector<std::uint8_t> bits);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return bits_.size(); }

  std::uint8_t at(int x, int y) const { return bits_[static_cast<std::size_t>(y) * width_ + x]; }
  std::uint8_t bit(std::size_t i) const { return bits_[i]; }
  void set(std::size_t i, std::uint8_t value);

  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  friend bool operator==(const WatermarkBitmap&, const WatermarkBitmap&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Throws DimensionsNotBlockAligned unless both dimensions are multiples of 8.
void require_block_aligned(const GrayImage& img);

/// Reads binary PGM (P5, maxval 255) or PNG. Color PNGs are reduced to
/// luma with round(0.299R + 0.587G + 0.114B).
GrayImage load_image(const std::filesystem::path& path);

/// Writes P5 for `.pgm`, 8-bit grayscale PNG for `.png`.
void save_image(const GrayImage& img, const std::filesystem::path& path);

std::vector<ImageBlock> partition_blocks(const GrayImage& img);
GrayImage assemble_blocks(std::span<const ImageBlock> blocks, int width, int height);

/// PBM (P1/P4) directly; any other image is binarized at 128 with dark
/// pixels mapping to bit 1.
WatermarkBitmap load_watermark(const std::filesystem::path& path);

/// Writes a P4 PBM (bit 1 = black).
void save_watermark(const WatermarkBitmap& wm, const std::filesystem::path& path);

/// P1 text encoding of the bitmap, suitable for embedding in JSON.
std::string encode_pbm_ascii(const WatermarkBitmap& wm);

/// Renders a bitmap as a grayscale image (bit 1 black, bit 0 white).
GrayImage watermark_to_image(const WatermarkBitmap& wm);

}  // namespace dseqmark
