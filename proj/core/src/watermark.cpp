#include "dseqmark/watermark.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dseqmark/error.hpp"
#include "dseqmark/metrics.hpp"

namespace dseqmark {

void EmbedConfig::validate() const {
  if (!std::isfinite(beta) || beta < 0.0) throw Error(ErrorCode::InvalidArgument, "beta must be finite and >= 0");
  if (!std::isfinite(gain) || gain < 0.0) throw Error(ErrorCode::InvalidArgument, "gain must be finite and >= 0");
  if (!std::isfinite(threshold)) throw Error(ErrorCode::InvalidArgument, "threshold must be finite");
  detector.validate();
  css.validate();
}

std::vector<std::size_t> BitAssignment::repetitions(int block_count) const {
  std::vector<std::size_t> reps(bit_count, 0);
  for (int b = 0; b < block_count; ++b) ++reps[bit_for_block(b)];
  return reps;
}

std::vector<double> amplitude_weights(const JndMask& mask, const CoefficientGrid& grid) {
  if (mask.size() != grid.size()) throw Error(ErrorCode::GeometryMismatch, "mask does not match coefficient grid");
  std::vector<double> weights = mask.normalized;
  if (mask.luminance_mode == LuminanceMode::MultiplicativeDL) {
    const auto dl = luminance_sensitivity_all(grid);
    for (std::size_t b = 0; b < weights.size(); ++b) weights[b] *= dl[b];
  }
  return weights;
}

JndMask compute_mask(const GrayImage& img, const CoefficientGrid& grid, const EmbedConfig& cfg) {
  const FeatureGrid features = extract_features(img, grid, cfg.detector, cfg.css);
  return build_mask(features, cfg.luminance_mode, cfg.luminance_scaling);
}

namespace {

std::size_t chips_needed(const CoefficientGrid& grid) { return grid.size() * kMidBandSize; }

}  // namespace

EmbedResult embed_with_mask(const GrayImage& img, const WatermarkBitmap& wm, const EmbedConfig& cfg, JndMask mask) {
  require_block_aligned(img);
  if (wm.size() == 0) throw Error(ErrorCode::EmptyBitmap, "watermark has no bits");
  cfg.validate();

  CoefficientGrid grid = transform_image(img);
  const DSequence seq(cfg.prime_q, chips_needed(grid));
  const auto weights = amplitude_weights(mask, grid);
  const BitAssignment assignment{wm.size()};

  for (auto& blk : grid.blocks) {
    const auto b = static_cast<std::size_t>(blk.origin.linear);
    const double sign = wm.bit(assignment.bit_for_block(blk.origin.linear)) == 0 ? 1.0 : -1.0;
    const double amplitude = sign * cfg.gain * cfg.beta * weights[b];
    const std::size_t offset = b * kMidBandSize;
    for (std::size_t k = 0; k < kMidBandSize; ++k) blk.coeffs[kMidBand[k]] += amplitude * seq.chip(offset + k);
  }

  EmbedResult result;
  result.watermarked = inverse_transform_image(grid);
  result.mask = std::move(mask);
  result.sequence_wraps = seq.wraps(chips_needed(grid));
  return result;
}

EmbedResult embed_detailed(const GrayImage& img, const WatermarkBitmap& wm, const EmbedConfig& cfg) {
  require_block_aligned(img);
  if (wm.size() == 0) throw Error(ErrorCode::EmptyBitmap, "watermark has no bits");
  cfg.validate();
  // Key validation before the expensive feature pass.
  (void)DSequence(cfg.prime_q, 1);
  JndMask mask = compute_mask(img, transform_image(img), cfg);
  return embed_with_mask(img, wm, cfg, std::move(mask));
}

GrayImage embed(const GrayImage& img, const WatermarkBitmap& wm, const EmbedConfig& cfg) {
  return embed_detailed(img, wm, cfg).watermarked;
}

std::vector<double> block_correlations(const CoefficientGrid& grid, const DSequence& seq) {
  std::vector<double> c(grid.size());
  for (const auto& blk : grid.blocks) {
    const auto b = static_cast<std::size_t>(blk.origin.linear);
    const std::size_t offset = b * kMidBandSize;
    double acc = 0.0;
    for (std::size_t k = 0; k < kMidBandSize; ++k) acc += blk.coeffs[kMidBand[k]] * seq.chip(offset + k);
    c[b] = acc / static_cast<double>(kMidBandSize);
  }
  return c;
}

CorrelationReport extract(const GrayImage& img, int wm_width, int wm_height, const EmbedConfig& cfg,
                          const std::optional<WatermarkBitmap>& reference) {
  require_block_aligned(img);
  if (wm_width <= 0 || wm_height <= 0) throw Error(ErrorCode::MissingSize, "watermark size must be positive");
  if (!std::isfinite(cfg.threshold)) throw Error(ErrorCode::InvalidArgument, "threshold must be finite");
  const auto bit_count = static_cast<std::size_t>(wm_width) * static_cast<std::size_t>(wm_height);
  if (bit_count > static_cast<std::size_t>(img.block_count())) {
    throw Error(ErrorCode::InvalidArgument, "watermark has more bits than the image has blocks");
  }

  const CoefficientGrid grid = transform_image(img);
  const DSequence seq(cfg.prime_q, chips_needed(grid));
  CorrelationReport report;
  report.per_block_c = block_correlations(grid, seq);

  const BitAssignment assignment{bit_count};
  report.per_bit_score.assign(bit_count, 0.0);
  const auto reps = assignment.repetitions(img.block_count());
  for (int b = 0; b < img.block_count(); ++b) {
    report.per_bit_score[assignment.bit_for_block(b)] += report.per_block_c[static_cast<std::size_t>(b)];
  }
  std::vector<std::uint8_t> bits(bit_count);
  for (std::size_t i = 0; i < bit_count; ++i) {
    report.per_bit_score[i] /= static_cast<double>(reps[i]);
    bits[i] = report.per_bit_score[i] > cfg.threshold ? 0 : 1;
  }
  report.recovered = WatermarkBitmap(wm_width, wm_height, std::move(bits));
  if (reference) report.ber = ber(report.recovered, *reference);
  return report;
}

PresenceStatistic detect_presence(const GrayImage& img, const EmbedConfig& cfg) {
  require_block_aligned(img);
  const CoefficientGrid grid = transform_image(img);
  const DSequence seq(cfg.prime_q, chips_needed(grid));
  const auto c = block_correlations(grid, seq);

  PresenceStatistic stat;
  const double n = static_cast<double>(c.size());
  std::vector<double> abs_c(c.size());
  double sum = 0.0;
  double sum_abs = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    sum += c[i];
    abs_c[i] = std::abs(c[i]);
    sum_abs += abs_c[i];
  }
  stat.mean_c = sum / n;
  stat.mean_abs_c = sum_abs / n;
  double var = 0.0;
  for (double v : c) var += (v - stat.mean_c) * (v - stat.mean_c);
  stat.stddev_c = std::sqrt(var / n);
  const auto [lo, hi] = std::minmax_element(c.begin(), c.end());
  stat.min_c = *lo;
  stat.max_c = *hi;
  const auto mid = abs_c.begin() + static_cast<std::ptrdiff_t>(abs_c.size() / 2);
  std::nth_element(abs_c.begin(), mid, abs_c.end());
  stat.median_abs_c = *mid;
  return stat;
}

}  // namespace dseqmark
