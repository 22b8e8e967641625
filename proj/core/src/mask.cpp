#include "dseqmark/mask.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "dseqmark/error.hpp"

namespace dseqmark {

std::string_view to_string(LuminanceMode mode) noexcept {
  return mode == LuminanceMode::AdditiveCorrection ? "additive" : "multiplicative";
}

LuminanceMode parse_luminance_mode(std::string_view text) {
  if (text == "additive" || text == "additive-correction") return LuminanceMode::AdditiveCorrection;
  if (text == "multiplicative" || text == "multiplicative-dl") return LuminanceMode::MultiplicativeDL;
  throw Error(ErrorCode::InvalidArgument, "unknown luminance mode '" + std::string(text) + "'");
}

namespace {

// Scales so the maximum becomes 64; an all-zero feature stays zero.
std::vector<double> anchor_to_64(std::vector<double> values) {
  const double peak = values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
  if (!(peak > 0.0)) {
    std::fill(values.begin(), values.end(), 0.0);
    return values;
  }
  for (auto& v : values) v = 64.0 * v / peak;
  return values;
}

template <typename Pixels>
std::vector<double> count_per_block(int width, int height, Pixels&& for_each_pixel) {
  if (width % kBlockSize != 0 || height % kBlockSize != 0 || width <= 0 || height <= 0) {
    throw Error(ErrorCode::DimensionsNotBlockAligned, "feature map is not block aligned");
  }
  const int bpr = width / kBlockSize;
  std::vector<double> counts(static_cast<std::size_t>(bpr) * (height / kBlockSize), 0.0);
  for_each_pixel([&](int x, int y) { counts[static_cast<std::size_t>((y / kBlockSize) * bpr + x / kBlockSize)] += 1.0; });
  return counts;
}

}  // namespace

std::vector<double> texture_feature(const CoefficientGrid& grid) {
  std::vector<double> pt;
  pt.reserve(grid.blocks.size());
  for (const auto& blk : grid.blocks) {
    double ac_energy = 0.0;
    for (int i = 1; i < kBlockArea; ++i) ac_energy += blk.coeffs[i] * blk.coeffs[i];
    pt.push_back(std::log(std::max(ac_energy, 1.0)));
  }
  return anchor_to_64(std::move(pt));
}

std::vector<double> edge_feature(const EdgeMap& edges) {
  return anchor_to_64(count_per_block(edges.width(), edges.height(), [&](auto&& add) {
    for (int y = 0; y < edges.height(); ++y) {
      for (int x = 0; x < edges.width(); ++x) {
        if (edges.at(x, y)) add(x, y);
      }
    }
  }));
}

std::vector<double> corner_feature(const CornerMap& corners) {
  return anchor_to_64(count_per_block(corners.width, corners.height, [&](auto&& add) {
    for (const auto& p : corners.points) {
      if (p.x < 0 || p.y < 0 || p.x >= corners.width || p.y >= corners.height) {
        throw Error(ErrorCode::GeometryMismatch, "corner point outside the image");
      }
      add(p.x, p.y);
    }
  }));
}

std::vector<double> luminance_feature(const GrayImage& img) {
  require_block_aligned(img);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(img.block_count()));
  for (int b = 0; b < img.block_count(); ++b) out.push_back(block_luminance(img, block_at(b, img.blocks_per_row())));
  return out;
}

FeatureGrid extract_features(const GrayImage& img, const CoefficientGrid& grid, const DetectorChoice& detector,
                             const CssParams& css) {
  require_block_aligned(img);
  if (grid.blocks_per_row != img.blocks_per_row() || grid.blocks_per_col != img.blocks_per_col()) {
    throw Error(ErrorCode::GeometryMismatch, "coefficient grid does not match the image");
  }
  const EdgeMap edges = detect_edges(img, detector);
  const CornerMap corners = detect_corners(img, edges, css);
  FeatureGrid f;
  f.blocks_per_row = img.blocks_per_row();
  f.blocks_per_col = img.blocks_per_col();
  f.texture = texture_feature(grid);
  f.edge = edge_feature(edges);
  f.corner = corner_feature(corners);
  f.luminance = luminance_feature(img);
  return f;
}

JndMask build_mask(const FeatureGrid& features, LuminanceMode mode, LuminanceScaling scaling) {
  const std::size_t n = static_cast<std::size_t>(features.blocks_per_row) * features.blocks_per_col;
  if (n == 0 || features.texture.size() != n || features.edge.size() != n || features.corner.size() != n ||
      features.luminance.size() != n) {
    throw Error(ErrorCode::GeometryMismatch, "feature grids do not share one block geometry");
  }
  const double weight = scaling == LuminanceScaling::Scaled ? kScaledLuminanceWeight : 1.0;
  JndMask mask;
  mask.blocks_per_row = features.blocks_per_row;
  mask.blocks_per_col = features.blocks_per_col;
  mask.luminance_mode = mode;
  mask.raw.resize(n);
  for (std::size_t b = 0; b < n; ++b) {
    const double initial = std::max(0.0, features.texture[b] - 0.5 * (features.edge[b] + features.corner[b]));
    double value = initial;
    if (mode == LuminanceMode::AdditiveCorrection) {
      const double d = 128.0 - features.luminance[b];
      value += weight * d * d;
    }
    mask.raw[b] = value;
  }
  const double peak = *std::max_element(mask.raw.begin(), mask.raw.end());
  mask.normalized.resize(n, 0.0);
  if (peak > 0.0) {
    for (std::size_t b = 0; b < n; ++b) mask.normalized[b] = mask.raw[b] / peak;
  }
  return mask;
}

std::string format_mask_rows(const JndMask& mask, std::span<const int> rows) {
  for (int r : rows) {
    if (r < 0 || r >= mask.blocks_per_col) {
      throw Error(ErrorCode::InvalidRow, "block row " + std::to_string(r) + " outside 0.." +
                                             std::to_string(mask.blocks_per_col - 1));
    }
  }
  std::string out = "block_col";
  for (int r : rows) out += ",row_" + std::to_string(r);
  out += '\n';
  if (rows.empty()) return out;
  char buf[32];
  for (int c = 0; c < mask.blocks_per_row; ++c) {
    out += std::to_string(c);
    for (int r : rows) {
      std::snprintf(buf, sizeof buf, ",%.6f", mask.normalized[static_cast<std::size_t>(r * mask.blocks_per_row + c)]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

void dump_mask_rows(const JndMask& mask, std::span<const int> rows, const std::filesystem::path& path) {
  const std::string csv = format_mask_rows(mask, rows);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::UnwritableDestination, "cannot create " + path.string());
  out << csv;
  if (!out) throw Error(ErrorCode::UnwritableDestination, "write failed for " + path.string());
}

GrayImage mask_to_image(const JndMask& mask) {
  GrayImage img(mask.blocks_per_row * kBlockSize, mask.blocks_per_col * kBlockSize);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const double v = mask.normalized[static_cast<std::size_t>((y / kBlockSize) * mask.blocks_per_row + x / kBlockSize)];
      img.at(x, y) = round_clamp(255.0 * v);
    }
  }
  return img;
}

}  // namespace dseqmark
