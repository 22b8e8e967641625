#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "dseqmark/dseq.hpp"
#include "dseqmark/features.hpp"
#include "dseqmark/imaging.hpp"
#include "dseqmark/mask.hpp"
#include "dseqmark/transform.hpp"

namespace dseqmark {

inline constexpr int kMidBandFirst = 6;
inline constexpr int kMidBandLast = 27;
inline constexpr std::size_t kMidBandSize = kMidBandLast - kMidBandFirst + 1;

/// Row-major coefficient positions of the mid band, in zigzag order.
inline constexpr std::array<int, kMidBandSize> kMidBand = [] {
  std::array<int, kMidBandSize> out{};
  for (std::size_t k = 0; k < kMidBandSize; ++k) out[k] = kZigzag[kMidBandFirst + k];
  return out;
}();

/// Coefficient units added per unit of beta in a block whose normalized
/// mask weight is 1.
inline constexpr double kDefaultEmbeddingGain = 1750.0;

struct EmbedConfig {
  double beta = 0.007;
  std::uint64_t prime_q = 2467;
  LuminanceMode luminance_mode = LuminanceMode::AdditiveCorrection;
  LuminanceScaling luminance_scaling = LuminanceScaling::Scaled;
  double threshold = 0.0;
  double gain = kDefaultEmbeddingGain;
  DetectorChoice detector;
  CssParams css;

  /// beta and gain must be finite and non-negative, the threshold finite.
  void validate() const;
};

/// Block b carries bit b mod (width * height): cyclic row-major tiling.
struct BitAssignment {
  std::size_t bit_count = 0;

  std::size_t bit_for_block(int linear) const noexcept { return static_cast<std::size_t>(linear) % bit_count; }
  /// Number of blocks carrying each bit.
  std::vector<std::size_t> repetitions(int block_count) const;
};

struct CorrelationReport {
  std::vector<double> per_block_c;
  std::vector<double> per_bit_score;
  WatermarkBitmap recovered;
  std::optional<double> ber;
};

struct PresenceStatistic {
  double mean_abs_c = 0.0;  // the statistic
  double mean_c = 0.0;
  double stddev_c = 0.0;
  double min_c = 0.0;
  double max_c = 0.0;
  double median_abs_c = 0.0;
};

/// Per-block amplitude weight: normalized mask, times D_L in the
/// multiplicative luminance mode.
std::vector<double> amplitude_weights(const JndMask& mask, const CoefficientGrid& grid);

JndMask compute_mask(const GrayImage& img, const CoefficientGrid& grid, const EmbedConfig& cfg);

struct EmbedResult {
  GrayImage watermarked;
  JndMask mask;
  /// Set when the key's period is shorter than the chips consumed.
  bool sequence_wraps = false;
};

EmbedResult embed_detailed(const GrayImage& img, const WatermarkBitmap& wm, const EmbedConfig& cfg);
/// Same, with a precomputed mask (the mask depends only on the cover, so
/// beta sweeps can reuse it). Throws GeometryMismatch if it does not fit.
EmbedResult embed_with_mask(const GrayImage& img, const WatermarkBitmap& wm, const EmbedConfig& cfg, JndMask mask);
GrayImage embed(const GrayImage& img, const WatermarkBitmap& wm, const EmbedConfig& cfg);

/// Blind extraction: correlate each block's mid band with the key's chips
/// and average per bit. Score > threshold decodes as 0, otherwise 1.
CorrelationReport extract(const GrayImage& img, int wm_width, int wm_height, const EmbedConfig& cfg,
                          const std::optional<WatermarkBitmap>& reference = std::nullopt);

/// C(b) for every block.
std::vector<double> block_correlations(const CoefficientGrid& grid, const DSequence& seq);

PresenceStatistic detect_presence(const GrayImage& img, const EmbedConfig& cfg);

}  // namespace dseqmark
