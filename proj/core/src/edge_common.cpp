#include "edge_common.hpp"

#include <algorithm>
#include <cmath>

namespace dseqmark::detail {

namespace {
// Relative tolerance for ties in suppression; keeps symmetric step edges
// stable under rescaling.
constexpr double kTieTolerance = 1e-9;
}  // namespace

double RealImage::clamped(int x, int y) const {
  x = std::clamp(x, 0, width - 1);
  y = std::clamp(y, 0, height - 1);
  return at(x, y);
}

double RealImage::bilinear(double x, double y) const {
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const int x0 = static_cast<int>(fx);
  const int y0 = static_cast<int>(fy);
  const double ax = x - fx;
  const double ay = y - fy;
  const double top = clamped(x0, y0) * (1 - ax) + clamped(x0 + 1, y0) * ax;
  const double bottom = clamped(x0, y0 + 1) * (1 - ax) + clamped(x0 + 1, y0 + 1) * ax;
  return top * (1 - ay) + bottom * ay;
}

RealImage to_real(const GrayImage& img) {
  RealImage out(img.width(), img.height());
  std::copy(img.samples().begin(), img.samples().end(), out.data.begin());
  return out;
}

RealImage gaussian_blur(const RealImage& in, double sigma) {
  if (sigma <= 0.0) return in;
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    const double w = std::exp(-(k * k) / (2.0 * sigma * sigma));
    kernel[static_cast<std::size_t>(k + radius)] = w;
    sum += w;
  }
  for (auto& w : kernel) w /= sum;

  RealImage tmp(in.width, in.height);
  for (int y = 0; y < in.height; ++y) {
    for (int x = 0; x < in.width; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) acc += kernel[static_cast<std::size_t>(k + radius)] * in.clamped(x + k, y);
      tmp.at(x, y) = acc;
    }
  }
  RealImage out(in.width, in.height);
  for (int y = 0; y < in.height; ++y) {
    for (int x = 0; x < in.width; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) acc += kernel[static_cast<std::size_t>(k + radius)] * tmp.clamped(x, y + k);
      out.at(x, y) = acc;
    }
  }
  return out;
}

RealImage non_max_suppress(const RealImage& strength, const std::vector<double>& angle, double radius) {
  RealImage out(strength.width, strength.height);
  for (int y = 0; y < strength.height; ++y) {
    for (int x = 0; x < strength.width; ++x) {
      const double v = strength.at(x, y);
      if (v <= 0.0) continue;
      const double a = angle[static_cast<std::size_t>(y) * strength.width + x];
      const double dx = radius * std::cos(a);
      const double dy = -radius * std::sin(a);  // image rows grow downwards
      const double ahead = strength.bilinear(x + dx, y + dy);
      const double behind = strength.bilinear(x - dx, y - dy);
      const double floor_v = v * (1.0 + kTieTolerance);
      if (floor_v >= ahead && floor_v >= behind) out.at(x, y) = v;
    }
  }
  return out;
}

EdgeMap hysteresis(const RealImage& strength, double low, double high) {
  EdgeMap edges(strength.width, strength.height);
  std::vector<int> stack;
  const int w = strength.width;
  const int h = strength.height;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double v = strength.at(x, y);
      if (!(v >= high && v > 0.0) || edges.at(x, y)) continue;
      edges.set(x, y, true);
      stack.push_back(y * w + x);
      while (!stack.empty()) {
        const int idx = stack.back();
        stack.pop_back();
        const int cx = idx % w;
        const int cy = idx / w;
        for (int ny = std::max(0, cy - 1); ny <= std::min(h - 1, cy + 1); ++ny) {
          for (int nx = std::max(0, cx - 1); nx <= std::min(w - 1, cx + 1); ++nx) {
            if (!edges.at(nx, ny) && strength.at(nx, ny) >= low && strength.at(nx, ny) > 0.0) {
              edges.set(nx, ny, true);
              stack.push_back(ny * w + nx);
            }
          }
        }
      }
    }
  }
  return edges;
}

}  // namespace dseqmark::detail
