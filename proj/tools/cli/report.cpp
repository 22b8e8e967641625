#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "dseqmark/error.hpp"

#ifndef DSEQMARK_VERSION
#define DSEQMARK_VERSION "unknown"
#endif

namespace dseqmark::cli {

Json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

Json to_json(const DetectorChoice& detector) {
  Json j;
  j["kind"] = std::string(to_string(detector.kind));
  if (detector.kind == EdgeDetectorKind::PhaseCongruency) {
    const auto& p = detector.phase;
    j["scales"] = p.scales;
    j["orientations"] = p.orientations;
    j["min_wavelength"] = p.min_wavelength;
    j["mult"] = p.mult;
    j["sigma_on_f"] = p.sigma_on_f;
    j["noise_k"] = p.noise_k;
    j["cutoff"] = p.cutoff;
    j["gain"] = p.gain;
    j["low_threshold"] = p.low_threshold;
    j["high_threshold"] = p.high_threshold;
  } else {
    j["sigma"] = detector.gradient.sigma;
    j["low_ratio"] = detector.gradient.low_ratio;
    j["high_ratio"] = detector.gradient.high_ratio;
  }
  return j;
}

Json to_json(const CssParams& css) {
  return Json{{"sigma", css.sigma},
              {"threshold_ratio", css.threshold_ratio},
              {"max_angle_deg", css.max_angle_deg},
              {"max_gap", css.max_gap},
              {"include_endpoints", css.include_endpoints},
              {"min_length_fraction", css.min_length_fraction}};
}

Json to_json(const EmbedConfig& cfg) {
  Json j;
  j["beta"] = cfg.beta;
  j["prime_q"] = cfg.prime_q;
  j["gain"] = cfg.gain;
  j["luminance_mode"] = std::string(to_string(cfg.luminance_mode));
  j["luminance_scaling"] = cfg.luminance_scaling == LuminanceScaling::Scaled ? "scaled" : "literal";
  j["threshold"] = cfg.threshold;
  j["mid_band"] = Json{{"first_zigzag", kMidBandFirst}, {"last_zigzag", kMidBandLast}};
  j["detector"] = to_json(cfg.detector);
  j["css"] = to_json(cfg.css);
  return j;
}

Json to_json(const AttackSpec& spec) {
  Json j;
  j["spec"] = spec.to_string();
  j["kind"] = std::string(to_string(spec.kind));
  switch (spec.kind) {
    case AttackKind::Jpeg: j["quality"] = spec.quality; break;
    case AttackKind::GaussianNoise:
      if (spec.sigma >= 0.0) {
        j["sigma"] = spec.sigma;
      } else {
        j["variance_pct"] = spec.variance_pct;
      }
      break;
    case AttackKind::SaltPepper: j["density"] = spec.density; break;
    case AttackKind::MedianFilter: j["window"] = spec.window; break;
    case AttackKind::Sharpen: j["strength"] = spec.strength; break;
  }
  if (spec.stochastic()) j["seed"] = spec.seed;
  return j;
}

Json to_json(const QualityReport& q) {
  return Json{{"mse", number(q.mse)}, {"psnr_db", number(q.psnr_db)}, {"wpsnr_db", number(q.wpsnr_db)}};
}

Json to_json(const CorrelationReport& r) {
  Json j;
  j["width"] = r.recovered.width();
  j["height"] = r.recovered.height();
  j["per_bit_score"] = r.per_bit_score;
  j["ber"] = r.ber ? Json(*r.ber) : Json(nullptr);
  j["recovered"] = encode_pbm_ascii(r.recovered);
  return j;
}

Json to_json(const PresenceStatistic& p) {
  return Json{{"mean_abs_c", p.mean_abs_c}, {"mean_c", p.mean_c},   {"stddev_c", p.stddev_c},
              {"min_c", p.min_c},           {"max_c", p.max_c},     {"median_abs_c", p.median_abs_c}};
}

Json manifest(const std::string& command) {
  Json j;
  j["tool"] = "dseqmark";
  j["version"] = DSEQMARK_VERSION;
  j["command"] = command;
  j["inputs"] = Json::object();
  j["config"] = Json::object();
  j["outputs"] = Json::object();
  j["metrics"] = Json::object();
  return j;
}

void write_text(const std::string& text, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::UnwritableDestination, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error(ErrorCode::UnwritableDestination, "write failed for " + path.string());
}

void write_json(const Json& j, const std::filesystem::path& path) { write_text(j.dump(2) + "\n", path); }

std::filesystem::path manifest_path_for(const std::filesystem::path& output) {
  auto p = output;
  p += ".json";
  return p;
}

std::string fixed6(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace dseqmark::cli
