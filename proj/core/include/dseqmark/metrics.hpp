#pragma once

#include <vector>

#include "dseqmark/imaging.hpp"

namespace dseqmark {

/// Per-block noise visibility function, normalized so the flattest block is 1.
struct NvfGrid {
  int blocks_per_row = 0;
  int blocks_per_col = 0;
  std::vector<double> values;
};

struct QualityReport {
  double mse = 0.0;
  double psnr_db = 0.0;   // +inf when mse == 0
  double wpsnr_db = 0.0;  // +inf when the weighted mse == 0
  NvfGrid nvf;
};

double mse(const GrayImage& a, const GrayImage& b);

/// 20 log10(255 / sqrt(mse)), +inf for identical images.
double psnr(const GrayImage& a, const GrayImage& b);
double psnr_from_mse(double mse) noexcept;

/// 1 / (1 + population variance) per block, divided by its maximum.
NvfGrid nvf(const GrayImage& img);

/// Squared error weighted by the NVF of the original's block.
double weighted_mse(const GrayImage& original, const GrayImage& modified);
double wpsnr(const GrayImage& original, const GrayImage& modified);

double ber(const WatermarkBitmap& recovered, const WatermarkBitmap& reference);

QualityReport evaluate(const GrayImage& original, const GrayImage& modified);

}  // namespace dseqmark
