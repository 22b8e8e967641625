#pragma once

#include <array>
#include <span>
#include <vector>

#include "dseqmark/imaging.hpp"

namespace dseqmark {

/// 8x8 real-valued block, row-major: entry (p, q) lives at p * 8 + q where p
/// is the vertical frequency (row) and q the horizontal one.
using RealBlock = std::array<double, kBlockArea>;

/// Subtract/add 128 around the transform (JPEG level shift).
enum class LevelShift { Off, Centered };

struct DctBlock {
  RealBlock coeffs{};
  BlockIndex origin;

  double dc() const noexcept { return coeffs[0]; }
  double at(int p, int q) const noexcept { return coeffs[p * kBlockSize + q]; }
  double& at(int p, int q) noexcept { return coeffs[p * kBlockSize + q]; }
};

/// Per-block DCT coefficients for a whole image.
struct CoefficientGrid {
  std::vector<DctBlock> blocks;
  int blocks_per_row = 0;
  int blocks_per_col = 0;

  int width() const noexcept { return blocks_per_row * kBlockSize; }
  int height() const noexcept { return blocks_per_col * kBlockSize; }
  std::size_t size() const noexcept { return blocks.size(); }
};

/// Orthonormal 2D DCT-II (alpha_0 = 1/sqrt(8), alpha_p = sqrt(2/8)).
RealBlock dct2(const RealBlock& samples, LevelShift shift = LevelShift::Off);
DctBlock dct2(const SampleBlock& samples, BlockIndex origin, LevelShift shift = LevelShift::Off);

/// Inverse of dct2. Output is unrounded.
RealBlock idct2(const RealBlock& coeffs, LevelShift shift = LevelShift::Off);

CoefficientGrid transform_image(const GrayImage& img, LevelShift shift = LevelShift::Off);

/// Rounds to nearest and clamps into [0, 255]; the only quantization step
/// in the pipeline.
GrayImage inverse_transform_image(const CoefficientGrid& grid, LevelShift shift = LevelShift::Off);

std::uint8_t round_clamp(double v) noexcept;

/// JPEG zigzag scan: kZigzag[k] is the row-major position of the k-th
/// coefficient in scan order.
inline constexpr std::array<int, kBlockArea> kZigzag = {
    0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,
    12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63};

}  // namespace dseqmark
