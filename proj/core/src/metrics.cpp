#include "dseqmark/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dseqmark/error.hpp"

namespace dseqmark {

namespace {

void require_same_size(const GrayImage& a, const GrayImage& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(ErrorCode::DimensionMismatch, std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                                                  " vs " + std::to_string(b.width()) + "x" +
                                                  std::to_string(b.height()));
  }
  if (a.empty()) throw Error(ErrorCode::DimensionMismatch, "images are empty");
}

}  // namespace

double mse(const GrayImage& a, const GrayImage& b) {
  require_same_size(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double e = static_cast<double>(a.samples()[i]) - static_cast<double>(b.samples()[i]);
    sum += e * e;
  }
  return sum / static_cast<double>(a.size());
}

double psnr_from_mse(double m) noexcept {
  if (m <= 0.0) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(255.0 / std::sqrt(m));
}

double psnr(const GrayImage& a, const GrayImage& b) { return psnr_from_mse(mse(a, b)); }

NvfGrid nvf(const GrayImage& img) {
  require_block_aligned(img);
  NvfGrid grid{img.blocks_per_row(), img.blocks_per_col(), {}};
  grid.values.reserve(static_cast<std::size_t>(img.block_count()));
  for (int b = 0; b < img.block_count(); ++b) {
    const BlockIndex blk = block_at(b, img.blocks_per_row());
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int y = 0; y < kBlockSize; ++y) {
      for (int x = 0; x < kBlockSize; ++x) {
        const double v = img.at(blk.col * kBlockSize + x, blk.row * kBlockSize + y);
        sum += v;
        sum_sq += v * v;
      }
    }
    const double mean = sum / kBlockArea;
    const double variance = std::max(0.0, sum_sq / kBlockArea - mean * mean);
    grid.values.push_back(1.0 / (1.0 + variance));
  }
  const double peak = *std::max_element(grid.values.begin(), grid.values.end());
  for (auto& v : grid.values) v /= peak;
  return grid;
}

namespace {

double weighted_mse_with(const GrayImage& original, const GrayImage& modified, const NvfGrid& weights) {
  double sum = 0.0;
  for (int y = 0; y < original.height(); ++y) {
    for (int x = 0; x < original.width(); ++x) {
      const double e = static_cast<double>(original.at(x, y)) - static_cast<double>(modified.at(x, y));
      const double w = weights.values[static_cast<std::size_t>((y / kBlockSize) * weights.blocks_per_row + x / kBlockSize)];
      sum += e * e * w;
    }
  }
  return sum / static_cast<double>(original.size());
}

}  // namespace

double weighted_mse(const GrayImage& original, const GrayImage& modified) {
  require_same_size(original, modified);
  return weighted_mse_with(original, modified, nvf(original));
}

double wpsnr(const GrayImage& original, const GrayImage& modified) {
  return psnr_from_mse(weighted_mse(original, modified));
}

double ber(const WatermarkBitmap& recovered, const WatermarkBitmap& reference) {
  if (recovered.width() != reference.width() || recovered.height() != reference.height()) {
    throw Error(ErrorCode::DimensionMismatch, "bitmaps differ in size");
  }
  if (recovered.size() == 0) throw Error(ErrorCode::EmptyBitmap, "bitmaps are empty");
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < recovered.size(); ++i) wrong += recovered.bit(i) != reference.bit(i);
  return static_cast<double>(wrong) / static_cast<double>(recovered.size());
}

QualityReport evaluate(const GrayImage& original, const GrayImage& modified) {
  require_same_size(original, modified);
  QualityReport r;
  r.nvf = nvf(original);
  r.mse = mse(original, modified);
  r.psnr_db = psnr_from_mse(r.mse);
  r.wpsnr_db = psnr_from_mse(weighted_mse_with(original, modified, r.nvf));
  return r;
}

}  // namespace dseqmark
