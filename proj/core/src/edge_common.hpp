#pragma once

#include <vector>

#include "dseqmark/features.hpp"

namespace dseqmark::detail {

/// Dense row-major real image.
struct RealImage {
  int width = 0;
  int height = 0;
  std::vector<double> data;

  RealImage() = default;
  RealImage(int w, int h, double fill = 0.0) : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}
  double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
  double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
  /// Border-replicated access.
  double clamped(int x, int y) const;
  /// Bilinear sample with replicated borders.
  double bilinear(double x, double y) const;
};

RealImage to_real(const GrayImage& img);
RealImage gaussian_blur(const RealImage& in, double sigma);

/// Keeps pixels that are not smaller than both neighbours along the normal
/// direction `angle[i]` (radians, x right, y up) sampled at `radius`.
RealImage non_max_suppress(const RealImage& strength, const std::vector<double>& angle, double radius);

/// Pixels >= high seed edges; 8-connected pixels >= low extend them.
EdgeMap hysteresis(const RealImage& strength, double low, double high);

}  // namespace dseqmark::detail
