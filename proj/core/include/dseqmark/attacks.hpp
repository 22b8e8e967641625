#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "dseqmark/imaging.hpp"

namespace dseqmark {

enum class AttackKind { Jpeg, GaussianNoise, SaltPepper, MedianFilter, Sharpen };

std::string_view to_string(AttackKind kind) noexcept;

/// One attack with its parameters. Only the fields of `kind` are used.
struct AttackSpec {
  AttackKind kind = AttackKind::Jpeg;
  int quality = 75;              // jpeg, 1..100
  double variance_pct = 0.0;     // gaussian: variance as percent of 255^2
  double sigma = -1.0;           // gaussian: absolute std-dev; used when >= 0
  double density = 0.0;          // salt-pepper, [0, 1]
  int window = 3;                // median, odd >= 3
  double strength = 1.0;         // sharpen, >= 0
  std::uint64_t seed = 1;        // stochastic attacks

  /// Parses `jpeg:q=45`, `gauss:var=2%:seed=1`, `gauss:sigma=5`,
  /// `saltpepper:d=0.05:seed=1`, `median:w=3`, `sharpen:s=1.0`.
  static AttackSpec parse(std::string_view text);
  /// Canonical string form; parse(to_string()) round-trips.
  std::string to_string() const;
  void validate() const;
  bool stochastic() const noexcept { return kind == AttackKind::GaussianNoise || kind == AttackKind::SaltPepper; }
};

struct AttackResult {
  GrayImage attacked;
  AttackSpec spec;
  std::uint64_t seed = 0;
};

/// Standard (Annex K) luminance quantization table, row-major.
inline constexpr std::array<int, 64> kJpegLuminanceTable = {
    16, 11, 10, 16, 24,  40,  51,  61,  12, 12, 14, 19, 26,  58,  60,  55,
    14, 13, 16, 24, 40,  57,  69,  56,  14, 17, 22, 29, 51,  87,  80,  62,
    18, 22, 37, 56, 68,  109, 103, 77,  24, 35, 55, 64, 81,  104, 113, 92,
    49, 64, 78, 87, 103, 121, 120, 101, 72, 92, 95, 98, 112, 100, 103, 99};

/// Base table scaled by the IJG quality mapping, entries clamped to 1..255.
std::array<int, 64> jpeg_quant_table(int quality);

AttackResult jpeg_attack(const GrayImage& img, int quality);
AttackResult gaussian_noise(const GrayImage& img, double variance_pct, std::uint64_t seed);
AttackResult gaussian_noise_sigma(const GrayImage& img, double sigma, std::uint64_t seed);
AttackResult salt_pepper(const GrayImage& img, double density, std::uint64_t seed);
AttackResult median_filter(const GrayImage& img, int window);
/// Unsharp mask against a replicated-border 3x3 box blur.
AttackResult sharpen(const GrayImage& img, double strength);

AttackResult apply_attack(const GrayImage& img, const AttackSpec& spec);

}  // namespace dseqmark
