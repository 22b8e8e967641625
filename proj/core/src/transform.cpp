#include "dseqmark/transform.hpp"

#include <cmath>
#include <numbers>

#include "dseqmark/error.hpp"

namespace dseqmark {

namespace {

// basis[p][m] = alpha_p * cos(pi * (2m + 1) * p / 16). B = C A C^T.
struct DctBasis {
  std::array<std::array<double, kBlockSize>, kBlockSize> c{};

  DctBasis() {
    for (int p = 0; p < kBlockSize; ++p) {
      const double alpha = p == 0 ? std::sqrt(1.0 / kBlockSize) : std::sqrt(2.0 / kBlockSize);
      for (int m = 0; m < kBlockSize; ++m) {
        c[p][m] = alpha * std::cos(std::numbers::pi * (2 * m + 1) * p / (2.0 * kBlockSize));
      }
    }
  }
};

const DctBasis& basis() {
  static const DctBasis b;
  return b;
}

}  // namespace

RealBlock dct2(const RealBlock& samples, LevelShift shift) {
  const auto& c = basis().c;
  const double offset = shift == LevelShift::Centered ? 128.0 : 0.0;
  // Rows first: tmp[m][q] = sum_n A[m][n] C[q][n]
  RealBlock tmp{};
  for (int m = 0; m < kBlockSize; ++m) {
    for (int q = 0; q < kBlockSize; ++q) {
      double acc = 0.0;
      for (int n = 0; n < kBlockSize; ++n) acc += (samples[m * kBlockSize + n] - offset) * c[q][n];
      tmp[m * kBlockSize + q] = acc;
    }
  }
  RealBlock out{};
  for (int p = 0; p < kBlockSize; ++p) {
    for (int q = 0; q < kBlockSize; ++q) {
      double acc = 0.0;
      for (int m = 0; m < kBlockSize; ++m) acc += c[p][m] * tmp[m * kBlockSize + q];
      out[p * kBlockSize + q] = acc;
    }
  }
  return out;
}

DctBlock dct2(const SampleBlock& samples, BlockIndex origin, LevelShift shift) {
  RealBlock real{};
  for (int i = 0; i < kBlockArea; ++i) real[i] = samples[i];
  return DctBlock{dct2(real, shift), origin};
}

RealBlock idct2(const RealBlock& coeffs, LevelShift shift) {
  const auto& c = basis().c;
  const double offset = shift == LevelShift::Centered ? 128.0 : 0.0;
  RealBlock tmp{};
  for (int p = 0; p < kBlockSize; ++p) {
    for (int n = 0; n < kBlockSize; ++n) {
      double acc = 0.0;
      for (int q = 0; q < kBlockSize; ++q) acc += coeffs[p * kBlockSize + q] * c[q][n];
      tmp[p * kBlockSize + n] = acc;
    }
  }
  RealBlock out{};
  for (int m = 0; m < kBlockSize; ++m) {
    for (int n = 0; n < kBlockSize; ++n) {
      double acc = 0.0;
      for (int p = 0; p < kBlockSize; ++p) acc += c[p][m] * tmp[p * kBlockSize + n];
      out[m * kBlockSize + n] = acc + offset;
    }
  }
  return out;
}

CoefficientGrid transform_image(const GrayImage& img, LevelShift shift) {
  const auto blocks = partition_blocks(img);
  CoefficientGrid grid;
  grid.blocks_per_row = img.blocks_per_row();
  grid.blocks_per_col = img.blocks_per_col();
  grid.blocks.reserve(blocks.size());
  for (const auto& blk : blocks) grid.blocks.push_back(dct2(blk.samples, blk.index, shift));
  return grid;
}

std::uint8_t round_clamp(double v) noexcept {
  if (!(v > 0.0)) return 0;  // also maps NaN to 0
  if (v >= 255.0) return 255;
  return static_cast<std::uint8_t>(std::lround(v));
}

GrayImage inverse_transform_image(const CoefficientGrid& grid, LevelShift shift) {
  if (grid.blocks_per_row <= 0 || grid.blocks_per_col <= 0 ||
      grid.blocks.size() != static_cast<std::size_t>(grid.blocks_per_row) * grid.blocks_per_col) {
    throw Error(ErrorCode::GeometryMismatch, "coefficient grid does not cover a full image");
  }
  GrayImage img(grid.width(), grid.height());
  for (const auto& blk : grid.blocks) {
    const RealBlock spatial = idct2(blk.coeffs, shift);
    const int x0 = blk.origin.col * kBlockSize;
    const int y0 = blk.origin.row * kBlockSize;
    for (int y = 0; y < kBlockSize; ++y) {
      for (int x = 0; x < kBlockSize; ++x) img.at(x0 + x, y0 + y) = round_clamp(spatial[y * kBlockSize + x]);
    }
  }
  return img;
}

}  // namespace dseqmark
