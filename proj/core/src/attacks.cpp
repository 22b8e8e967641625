#include "dseqmark/attacks.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <vector>

#include "dseqmark/error.hpp"
#include "dseqmark/transform.hpp"

namespace dseqmark {

std::string_view to_string(AttackKind kind) noexcept {
  switch (kind) {
    case AttackKind::Jpeg: return "jpeg";
    case AttackKind::GaussianNoise: return "gauss";
    case AttackKind::SaltPepper: return "saltpepper";
    case AttackKind::MedianFilter: return "median";
    case AttackKind::Sharpen: return "sharpen";
  }
  return "unknown";
}

namespace {

[[noreturn]] void bad_spec(std::string_view text, const std::string& why) {
  throw Error(ErrorCode::InvalidAttackSpec, "'" + std::string(text) + "': " + why);
}

double parse_double(std::string_view spec, std::string_view value) {
  // std::from_chars for double is unavailable on some toolchains.
  std::string tmp(value);
  char* end = nullptr;
  const double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size() || !std::isfinite(v)) bad_spec(spec, "bad number '" + tmp + "'");
  return v;
}

std::uint64_t parse_u64(std::string_view spec, std::string_view value) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) bad_spec(spec, "bad integer '" + std::string(value) + "'");
  return v;
}

int parse_int(std::string_view spec, std::string_view value) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) bad_spec(spec, "bad integer '" + std::string(value) + "'");
  return v;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Gaussian draws from mt19937_64 via Box-Muller so streams
// are identical across standard libraries.
class NoiseSource {
 public:
  explicit NoiseSource(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace

AttackSpec AttackSpec::parse(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto colon = text.find(':', start);
    parts.push_back(text.substr(start, colon == std::string_view::npos ? std::string_view::npos : colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  AttackSpec spec;
  const std::string_view kind = parts.front();
  if (kind == "jpeg") {
    spec.kind = AttackKind::Jpeg;
  } else if (kind == "gauss" || kind == "gaussian") {
    spec.kind = AttackKind::GaussianNoise;
  } else if (kind == "saltpepper" || kind == "sp") {
    spec.kind = AttackKind::SaltPepper;
  } else if (kind == "median") {
    spec.kind = AttackKind::MedianFilter;
  } else if (kind == "sharpen") {
    spec.kind = AttackKind::Sharpen;
  } else {
    bad_spec(text, "unknown attack kind");
  }

  bool have_main = false;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto eq = parts[i].find('=');
    if (eq == std::string_view::npos) bad_spec(text, "expected key=value, got '" + std::string(parts[i]) + "'");
    const auto key = parts[i].substr(0, eq);
    auto value = parts[i].substr(eq + 1);
    if (key == "seed") {
      spec.seed = parse_u64(text, value);
      continue;
    }
    have_main = true;
    switch (spec.kind) {
      case AttackKind::Jpeg:
        if (key != "q") bad_spec(text, "jpeg takes q=<1..100>");
        spec.quality = parse_int(text, value);
        break;
      case AttackKind::GaussianNoise:
        if (key == "var") {
          if (!value.empty() && value.back() == '%') value.remove_suffix(1);
          spec.variance_pct = parse_double(text, value);
          spec.sigma = -1.0;
        } else if (key == "sigma") {
          spec.sigma = parse_double(text, value);
          if (spec.sigma < 0.0) bad_spec(text, "sigma must be >= 0");
        } else {
          bad_spec(text, "gauss takes var=<percent>% or sigma=<value>");
        }
        break;
      case AttackKind::SaltPepper:
        if (key != "d") bad_spec(text, "saltpepper takes d=<0..1>");
        spec.density = parse_double(text, value);
        break;
      case AttackKind::MedianFilter:
        if (key != "w") bad_spec(text, "median takes w=<odd >= 3>");
        spec.window = parse_int(text, value);
        break;
      case AttackKind::Sharpen:
        if (key != "s") bad_spec(text, "sharpen takes s=<strength>");
        spec.strength = parse_double(text, value);
        break;
    }
  }
  if (!have_main) bad_spec(text, "missing attack parameter");
  spec.validate();
  return spec;
}

std::string AttackSpec::to_string() const {
  switch (kind) {
    case AttackKind::Jpeg: return "jpeg:q=" + std::to_string(quality);
    case AttackKind::GaussianNoise:
      return (sigma >= 0.0 ? "gauss:sigma=" + format_number(sigma) : "gauss:var=" + format_number(variance_pct) + "%") +
             ":seed=" + std::to_string(seed);
    case AttackKind::SaltPepper: return "saltpepper:d=" + format_number(density) + ":seed=" + std::to_string(seed);
    case AttackKind::MedianFilter: return "median:w=" + std::to_string(window);
    case AttackKind::Sharpen: return "sharpen:s=" + format_number(strength);
  }
  return {};
}

void AttackSpec::validate() const {
  switch (kind) {
    case AttackKind::Jpeg:
      if (quality < 1 || quality > 100) {
        throw Error(ErrorCode::QualityOutOfRange, "JPEG quality " + std::to_string(quality) + " outside 1..100");
      }
      break;
    case AttackKind::GaussianNoise:
      if (sigma < 0.0 && !(variance_pct >= 0.0)) throw Error(ErrorCode::InvalidAttackSpec, "noise variance must be >= 0");
      break;
    case AttackKind::SaltPepper:
      if (!(density >= 0.0 && density <= 1.0)) throw Error(ErrorCode::InvalidAttackSpec, "density must be in [0, 1]");
      break;
    case AttackKind::MedianFilter:
      if (window < 3 || window % 2 == 0) {
        throw Error(ErrorCode::EvenWindow, "median window " + std::to_string(window) + " must be odd and >= 3");
      }
      break;
    case AttackKind::Sharpen:
      if (!(strength >= 0.0)) throw Error(ErrorCode::InvalidAttackSpec, "sharpen strength must be >= 0");
      break;
  }
}

std::array<int, 64> jpeg_quant_table(int quality) {
  if (quality < 1 || quality > 100) {
    throw Error(ErrorCode::QualityOutOfRange, "JPEG quality " + std::to_string(quality) + " outside 1..100");
  }
  const int scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;
  std::array<int, 64> table{};
  for (int i = 0; i < 64; ++i) table[i] = std::clamp((kJpegLuminanceTable[i] * scale + 50) / 100, 1, 255);
  return table;
}

AttackResult jpeg_attack(const GrayImage& img, int quality) {
  const auto table = jpeg_quant_table(quality);
  CoefficientGrid grid = transform_image(img, LevelShift::Centered);
  for (auto& blk : grid.blocks) {
    for (int i = 0; i < kBlockArea; ++i) {
      const double step = table[i];
      blk.coeffs[i] = std::round(blk.coeffs[i] / step) * step;
    }
  }
  AttackSpec spec;
  spec.kind = AttackKind::Jpeg;
  spec.quality = quality;
  return {inverse_transform_image(grid, LevelShift::Centered), spec, 0};
}

AttackResult gaussian_noise_sigma(const GrayImage& img, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw Error(ErrorCode::InvalidAttackSpec, "sigma must be >= 0");
  GrayImage out = img;
  NoiseSource noise(seed);
  for (auto& v : out.samples()) v = round_clamp(v + sigma * noise.normal());
  AttackSpec spec;
  spec.kind = AttackKind::GaussianNoise;
  spec.sigma = sigma;
  spec.seed = seed;
  return {std::move(out), spec, seed};
}

AttackResult gaussian_noise(const GrayImage& img, double variance_pct, std::uint64_t seed) {
  if (!(variance_pct >= 0.0) || !std::isfinite(variance_pct)) {
    throw Error(ErrorCode::InvalidAttackSpec, "noise variance must be >= 0");
  }
  const double sigma = 255.0 * std::sqrt(variance_pct / 100.0);
  AttackResult r = gaussian_noise_sigma(img, sigma, seed);
  r.spec.sigma = -1.0;
  r.spec.variance_pct = variance_pct;
  return r;
}

AttackResult salt_pepper(const GrayImage& img, double density, std::uint64_t seed) {
  if (!(density >= 0.0 && density <= 1.0)) throw Error(ErrorCode::InvalidAttackSpec, "density must be in [0, 1]");
  GrayImage out = img;
  NoiseSource noise(seed);
  for (auto& v : out.samples()) {
    const double hit = noise.uniform();
    const double coin = noise.uniform();
    if (hit < density) v = coin < 0.5 ? 0 : 255;
  }
  AttackSpec spec;
  spec.kind = AttackKind::SaltPepper;
  spec.density = density;
  spec.seed = seed;
  return {std::move(out), spec, seed};
}

AttackResult median_filter(const GrayImage& img, int window) {
  if (window < 3 || window % 2 == 0) {
    throw Error(ErrorCode::EvenWindow, "median window " + std::to_string(window) + " must be odd and >= 3");
  }
  const int r = window / 2;
  GrayImage out(img.width(), img.height());
  std::vector<std::uint8_t> neighbourhood(static_cast<std::size_t>(window) * window);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      std::size_t k = 0;
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          neighbourhood[k++] = img.at(std::clamp(x + dx, 0, img.width() - 1), std::clamp(y + dy, 0, img.height() - 1));
        }
      }
      const auto mid = neighbourhood.begin() + static_cast<std::ptrdiff_t>(neighbourhood.size() / 2);
      std::nth_element(neighbourhood.begin(), mid, neighbourhood.end());
      out.at(x, y) = *mid;
    }
  }
  AttackSpec spec;
  spec.kind = AttackKind::MedianFilter;
  spec.window = window;
  return {std::move(out), spec, 0};
}

AttackResult sharpen(const GrayImage& img, double strength) {
  if (!(strength >= 0.0) || !std::isfinite(strength)) {
    throw Error(ErrorCode::InvalidAttackSpec, "sharpen strength must be >= 0");
  }
  GrayImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      int sum = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          sum += img.at(std::clamp(x + dx, 0, img.width() - 1), std::clamp(y + dy, 0, img.height() - 1));
        }
      }
      const double blur = sum / 9.0;
      const double v = img.at(x, y);
      out.at(x, y) = round_clamp(v + strength * (v - blur));
    }
  }
  AttackSpec spec;
  spec.kind = AttackKind::Sharpen;
  spec.strength = strength;
  return {std::move(out), spec, 0};
}

AttackResult apply_attack(const GrayImage& img, const AttackSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case AttackKind::Jpeg: return jpeg_attack(img, spec.quality);
    case AttackKind::GaussianNoise:
      return spec.sigma >= 0.0 ? gaussian_noise_sigma(img, spec.sigma, spec.seed)
                               : gaussian_noise(img, spec.variance_pct, spec.seed);
    case AttackKind::SaltPepper: return salt_pepper(img, spec.density, spec.seed);
    case AttackKind::MedianFilter: return median_filter(img, spec.window);
    case AttackKind::Sharpen: return sharpen(img, spec.strength);
  }
  throw Error(ErrorCode::Internal, "unhandled attack kind");
}

}  // namespace dseqmark
