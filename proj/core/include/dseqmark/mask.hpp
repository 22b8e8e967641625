#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "dseqmark/features.hpp"
#include "dseqmark/transform.hpp"

namespace dseqmark {

/// Per-block perceptual features, all row-major over the block grid.
struct FeatureGrid {
  int blocks_per_row = 0;
  int blocks_per_col = 0;
  std::vector<double> texture;    // M_T in [0, 64]
  std::vector<double> edge;       // M_E in [0, 64]
  std::vector<double> corner;     // M_C in [0, 64]
  std::vector<double> luminance;  // M_L in [0, 255]

  std::size_t size() const noexcept { return texture.size(); }
};

enum class LuminanceMode { AdditiveCorrection, MultiplicativeDL };

std::string_view to_string(LuminanceMode mode) noexcept;
/// Accepts "additive" / "multiplicative".
LuminanceMode parse_luminance_mode(std::string_view text);

/// Weight of the (128 - M_L)^2 correction. Scaled keeps the correction's
/// peak at 64 (the texture range); Literal applies it unscaled.
enum class LuminanceScaling { Scaled, Literal };

inline constexpr double kScaledLuminanceWeight = 1.0 / 256.0;

struct JndMask {
  int blocks_per_row = 0;
  int blocks_per_col = 0;
  std::vector<double> raw;         // J_F >= 0
  std::vector<double> normalized;  // raw / max(raw), or all zero
  LuminanceMode luminance_mode = LuminanceMode::AdditiveCorrection;

  std::size_t size() const noexcept { return raw.size(); }
};

/// M_T from ln(max(sum of squared AC coefficients, 1)), scaled so the
/// largest block reaches 64.
std::vector<double> texture_feature(const CoefficientGrid& grid);

/// M_E from the count of edge pixels per block.
std::vector<double> edge_feature(const EdgeMap& edges);

/// M_C from the count of corner points per block.
std::vector<double> corner_feature(const CornerMap& corners);

/// M_L per block.
std::vector<double> luminance_feature(const GrayImage& img);

/// Runs edge and corner detection and gathers all four features.
FeatureGrid extract_features(const GrayImage& img, const CoefficientGrid& grid, const DetectorChoice& detector = {},
                             const CssParams& css = {});

/// J_I = M_T - (M_E + M_C) / 2 floored at 0; the additive mode then adds
/// the luminance parabola, the multiplicative mode leaves it for embedding.
JndMask build_mask(const FeatureGrid& features, LuminanceMode mode = LuminanceMode::AdditiveCorrection,
                   LuminanceScaling scaling = LuminanceScaling::Scaled);

/// CSV with header `block_col,row_<r>...` and one line per block column.
std::string format_mask_rows(const JndMask& mask, std::span<const int> rows);
void dump_mask_rows(const JndMask& mask, std::span<const int> rows, const std::filesystem::path& path);

/// Normalized mask as an image, one 8x8 tile per block.
GrayImage mask_to_image(const JndMask& mask);

}  // namespace dseqmark
