#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "dseqmark/imaging.hpp"
#include "dseqmark/transform.hpp"

namespace dseqmark {

enum class EdgeDetectorKind { GradientHysteresis, PhaseCongruency };

std::string_view to_string(EdgeDetectorKind kind) noexcept;

/// Canny-style detector. Thresholds are fractions of the largest gradient
/// magnitude so the result does not depend on image contrast.
struct GradientHysteresisParams {
  double sigma = 1.5;
  double low_ratio = 0.1;
  double high_ratio = 0.25;
};

/// Log-Gabor phase congruency with maximum-moment edge strength.
struct PhaseCongruencyParams {
  int scales = 4;
  int orientations = 6;
  double min_wavelength = 3.0;
  double mult = 2.1;           // wavelength ratio between successive scales
  double sigma_on_f = 0.55;    // log-Gabor bandwidth
  double noise_k = 2.0;        // std-devs of noise energy above the mean to reject
  double cutoff = 0.5;         // frequency-spread weighting cutoff
  double gain = 10.0;          // sharpness of the spread weighting sigmoid
  double low_threshold = 0.1;  // hysteresis on the maximum moment
  double high_threshold = 0.25;
};

struct DetectorChoice {
  EdgeDetectorKind kind = EdgeDetectorKind::PhaseCongruency;
  GradientHysteresisParams gradient;
  PhaseCongruencyParams phase;

  /// Accepts "phase-congruency" / "pc" and "gradient-hysteresis" / "canny".
  static DetectorChoice parse(std::string_view kind);
  /// Throws InvalidDetectorParameters.
  void validate() const;
};

class EdgeMap {
 public:
  EdgeMap() = default;
  EdgeMap(int width, int height) : width_(width), height_(height), flags_(static_cast<std::size_t>(width) * height, 0) {}

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::uint8_t at(int x, int y) const { return flags_[static_cast<std::size_t>(y) * width_ + x]; }
  void set(int x, int y, bool on) { flags_[static_cast<std::size_t>(y) * width_ + x] = on ? 1 : 0; }
  const std::vector<std::uint8_t>& flags() const noexcept { return flags_; }
  std::size_t count() const noexcept;

  friend bool operator==(const EdgeMap&, const EdgeMap&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> flags_;
};

struct CornerPoint {
  int x = 0;
  int y = 0;
  friend bool operator==(const CornerPoint&, const CornerPoint&) = default;
};

struct CornerMap {
  int width = 0;
  int height = 0;
  std::vector<CornerPoint> points;
};

/// Curvature-scale-space corner detection with adaptive local threshold
/// and corner-angle check.
struct CssParams {
  double sigma = 3.0;           // low fixed scale for curvature
  double threshold_ratio = 1.5; // times the mean |curvature| over the region of support
  double max_angle_deg = 162.0; // corners flatter than this are rejected as rounded
  int max_gap = 2;              // contour gap bridging, in pixels
  bool include_endpoints = false;
  /// Contours shorter than (width + height) * min_length_fraction are dropped.
  double min_length_fraction = 1.0 / 25.0;

  void validate() const;
};

EdgeMap detect_edges(const GrayImage& img, const DetectorChoice& choice = {});

/// Phase congruency maximum moment, exposed for inspection and tests.
std::vector<double> phase_congruency_moment(const GrayImage& img, const PhaseCongruencyParams& params);

CornerMap detect_corners(const GrayImage& img, const EdgeMap& edges, const CssParams& params = {});

/// Mean of the block's 64 samples.
double block_luminance(const GrayImage& img, BlockIndex block);

inline constexpr double kLuminanceExponent = 0.649;

/// (DC_b / DC_mean)^0.649 with DC_mean the image-wide mean DC; 0 when DC_b <= 0.
double luminance_sensitivity(const CoefficientGrid& grid, BlockIndex block);
std::vector<double> luminance_sensitivity_all(const CoefficientGrid& grid);

/// Thins a binary map to one-pixel-wide curves (Zhang-Suen).
EdgeMap thin_edges(const EdgeMap& edges);

GrayImage edge_map_to_image(const EdgeMap& edges);

}  // namespace dseqmark
