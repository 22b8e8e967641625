#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dseqmark/error.hpp"
#include "dseqmark/features.hpp"
#include "edge_common.hpp"
#include "phase_congruency.hpp"

namespace dseqmark {

using detail::RealImage;

std::string_view to_string(EdgeDetectorKind kind) noexcept {
  switch (kind) {
    case EdgeDetectorKind::GradientHysteresis: return "gradient-hysteresis";
    case EdgeDetectorKind::PhaseCongruency: return "phase-congruency";
  }
  return "unknown";
}

DetectorChoice DetectorChoice::parse(std::string_view kind) {
  DetectorChoice choice;
  if (kind == "phase-congruency" || kind == "pc") {
    choice.kind = EdgeDetectorKind::PhaseCongruency;
  } else if (kind == "gradient-hysteresis" || kind == "canny") {
    choice.kind = EdgeDetectorKind::GradientHysteresis;
  } else {
    throw Error(ErrorCode::InvalidDetectorParameters, "unknown edge detector '" + std::string(kind) + "'");
  }
  return choice;
}

void DetectorChoice::validate() const {
  const auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidDetectorParameters, msg); };
  if (kind == EdgeDetectorKind::GradientHysteresis) {
    if (!(gradient.sigma > 0.0 && gradient.sigma <= 10.0)) fail("gradient sigma must be in (0, 10]");
    if (!(gradient.low_ratio >= 0.0 && gradient.low_ratio <= gradient.high_ratio && gradient.high_ratio <= 1.0)) {
      fail("gradient thresholds must satisfy 0 <= low <= high <= 1");
    }
  } else {
    if (phase.scales < 2 || phase.scales > 8) fail("phase congruency needs 2..8 scales");
    if (phase.orientations < 2 || phase.orientations > 16) fail("phase congruency needs 2..16 orientations");
    if (!(phase.min_wavelength >= 2.0)) fail("minimum wavelength must be >= 2 pixels");
    if (!(phase.mult > 1.0)) fail("scale multiplier must exceed 1");
    if (!(phase.sigma_on_f > 0.0 && phase.sigma_on_f < 1.0)) fail("sigma_on_f must be in (0, 1)");
    if (!(phase.noise_k >= 0.0)) fail("noise k must be non-negative");
    if (!(phase.cutoff >= 0.0 && phase.cutoff <= 1.0)) fail("cutoff must be in [0, 1]");
    if (!(phase.gain > 0.0)) fail("gain must be positive");
    if (!(phase.low_threshold >= 0.0 && phase.low_threshold <= phase.high_threshold && phase.high_threshold <= 1.0)) {
      fail("moment thresholds must satisfy 0 <= low <= high <= 1");
    }
  }
}

std::size_t EdgeMap::count() const noexcept {
  return static_cast<std::size_t>(std::count(flags_.begin(), flags_.end(), std::uint8_t{1}));
}

namespace {

EdgeMap gradient_hysteresis(const GrayImage& img, const GradientHysteresisParams& params) {
  const RealImage smooth = detail::gaussian_blur(detail::to_real(img), params.sigma);
  RealImage magnitude(img.width(), img.height());
  std::vector<double> angle(magnitude.data.size());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      // Sobel on the smoothed image.
      const auto s = [&](int dx, int dy) { return smooth.clamped(x + dx, y + dy); };
      const double gx = (s(1, -1) + 2 * s(1, 0) + s(1, 1)) - (s(-1, -1) + 2 * s(-1, 0) + s(-1, 1));
      const double gy_down = (s(-1, 1) + 2 * s(0, 1) + s(1, 1)) - (s(-1, -1) + 2 * s(0, -1) + s(1, -1));
      magnitude.at(x, y) = std::hypot(gx, gy_down);
      angle[static_cast<std::size_t>(y) * img.width() + x] = std::atan2(-gy_down, gx);
    }
  }
  const RealImage thin = detail::non_max_suppress(magnitude, angle, 1.0);
  const double peak = *std::max_element(thin.data.begin(), thin.data.end());
  if (!(peak > 1e-9)) return EdgeMap(img.width(), img.height());
  return detail::hysteresis(thin, params.low_ratio * peak, params.high_ratio * peak);
}

}  // namespace

EdgeMap detect_edges(const GrayImage& img, const DetectorChoice& choice) {
  choice.validate();
  if (img.empty()) return EdgeMap(img.width(), img.height());
  if (choice.kind == EdgeDetectorKind::GradientHysteresis) return gradient_hysteresis(img, choice.gradient);

  const auto pc = detail::compute_phase_congruency(img, choice.phase);
  RealImage strength(img.width(), img.height());
  strength.data = pc.moment;
  const RealImage thin = detail::non_max_suppress(strength, pc.orientation, 1.5);
  return detail::hysteresis(thin, choice.phase.low_threshold, choice.phase.high_threshold);
}

GrayImage edge_map_to_image(const EdgeMap& edges) {
  std::vector<std::uint8_t> samples(edges.flags().size());
  std::transform(edges.flags().begin(), edges.flags().end(), samples.begin(),
                 [](std::uint8_t f) { return static_cast<std::uint8_t>(f ? 255 : 0); });
  return GrayImage(edges.width(), edges.height(), std::move(samples));
}

}  // namespace dseqmark
