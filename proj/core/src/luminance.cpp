#include <cmath>

#include "dseqmark/error.hpp"
#include "dseqmark/features.hpp"

namespace dseqmark {

double block_luminance(const GrayImage& img, BlockIndex block) {
  require_block_aligned(img);
  if (block.row < 0 || block.col < 0 || block.row >= img.blocks_per_col() || block.col >= img.blocks_per_row()) {
    throw Error(ErrorCode::InvalidArgument, "block outside the image");
  }
  int sum = 0;
  for (int y = 0; y < kBlockSize; ++y) {
    for (int x = 0; x < kBlockSize; ++x) sum += img.at(block.col * kBlockSize + x, block.row * kBlockSize + y);
  }
  return sum / static_cast<double>(kBlockArea);
}

namespace {

double mean_dc(const CoefficientGrid& grid) {
  if (grid.blocks.empty()) throw Error(ErrorCode::GeometryMismatch, "empty coefficient grid");
  double sum = 0.0;
  for (const auto& b : grid.blocks) sum += b.dc();
  return sum / static_cast<double>(grid.blocks.size());
}

double sensitivity(double dc, double dc_mean) {
  if (dc <= 0.0 || dc_mean <= 0.0) return 0.0;
  return std::pow(dc / dc_mean, kLuminanceExponent);
}

}  // namespace

double luminance_sensitivity(const CoefficientGrid& grid, BlockIndex block) {
  if (block.linear < 0 || static_cast<std::size_t>(block.linear) >= grid.blocks.size()) {
    throw Error(ErrorCode::InvalidArgument, "block outside the coefficient grid");
  }
  return sensitivity(grid.blocks[static_cast<std::size_t>(block.linear)].dc(), mean_dc(grid));
}

std::vector<double> luminance_sensitivity_all(const CoefficientGrid& grid) {
  const double dc_mean = mean_dc(grid);
  std::vector<double> out;
  out.reserve(grid.blocks.size());
  for (const auto& b : grid.blocks) out.push_back(sensitivity(b.dc(), dc_mean));
  return out;
}

}  // namespace dseqmark
