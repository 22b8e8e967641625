#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "dseqmark/error.hpp"
#include "dseqmark/imaging.hpp"

namespace testing_support {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(DSEQMARK_TEST_DATA) / name;
}

/// Code of the dseqmark::Error thrown by fn; records a failure if none is.
template <typename Fn>
dseqmark::ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const dseqmark::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no dseqmark::Error thrown";
  return dseqmark::ErrorCode::Internal;
}

inline dseqmark::GrayImage random_image(int w, int h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> s(static_cast<std::size_t>(w) * h);
  for (auto& v : s) v = static_cast<std::uint8_t>(rng() & 0xFF);
  return dseqmark::GrayImage(w, h, std::move(s));
}

/// Smooth random field: low-frequency sinusoids plus mild noise, closer to a
/// photograph than white noise.
inline dseqmark::GrayImage smooth_random_image(int w, int h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double fx[3], fy[3], ph[3], amp[3];
  for (int k = 0; k < 3; ++k) {
    fx[k] = 0.01 + 0.08 * u(rng);
    fy[k] = 0.01 + 0.08 * u(rng);
    ph[k] = 6.28 * u(rng);
    amp[k] = 15.0 + 25.0 * u(rng);
  }
  dseqmark::GrayImage img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double v = 128.0 + 20.0 * (u(rng) - 0.5);
      for (int k = 0; k < 3; ++k) v += amp[k] * std::sin(fx[k] * x + fy[k] * y + ph[k]);
      img.at(x, y) = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
    }
  }
  return img;
}

inline dseqmark::WatermarkBitmap random_bitmap(int w, int h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(w) * h);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1U);
  return dseqmark::WatermarkBitmap(w, h, std::move(bits));
}

/// Left half `lo`, right half `hi`.
inline dseqmark::GrayImage vertical_step(int w, int h, std::uint8_t lo, std::uint8_t hi) {
  dseqmark::GrayImage img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) img.at(x, y) = x < w / 2 ? lo : hi;
  }
  return img;
}

inline dseqmark::GrayImage filled_square(int size, int x0, int y0, int side, std::uint8_t bg, std::uint8_t fg) {
  dseqmark::GrayImage img(size, size, bg);
  for (int y = y0; y < y0 + side; ++y) {
    for (int x = x0; x < x0 + side; ++x) img.at(x, y) = fg;
  }
  return img;
}

}  // namespace testing_support
