#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dseqmark/attacks.hpp"
#include "dseqmark/error.hpp"
#include "dseqmark/features.hpp"
#include "dseqmark/imaging.hpp"
#include "dseqmark/mask.hpp"
#include "dseqmark/metrics.hpp"
#include "dseqmark/watermark.hpp"
#include "report.hpp"

namespace dseqmark::cli {

namespace {

// Options that feed EmbedConfig. Strings are resolved in the callback so
// that bad values surface as library errors (exit 2) with context.
struct ConfigOptions {
  std::uint64_t q = 2467;
  double beta = 0.007;
  double gain = kDefaultEmbeddingGain;
  double threshold = 0.0;
  std::string luminance = "additive";
  bool literal_luminance = false;
  std::string detector = "phase-congruency";

  EmbedConfig resolve() const {
    EmbedConfig cfg;
    cfg.prime_q = q;
    cfg.beta = beta;
    cfg.gain = gain;
    cfg.threshold = threshold;
    cfg.luminance_mode = parse_luminance_mode(luminance);
    cfg.luminance_scaling = literal_luminance ? LuminanceScaling::Literal : LuminanceScaling::Scaled;
    cfg.detector = DetectorChoice::parse(detector);
    return cfg;
  }
};

void add_key_option(CLI::App* sub, ConfigOptions& o) {
  sub->add_option("--q", o.q, "Prime key for the d-sequence")->capture_default_str();
}

void add_mask_options(CLI::App* sub, ConfigOptions& o) {
  sub->add_option("--gain", o.gain, "Coefficient units per unit beta at full mask weight")->capture_default_str();
  sub->add_option("--luminance", o.luminance, "Luminance handling: additive | multiplicative")->capture_default_str();
  sub->add_flag("--literal-luminance", o.literal_luminance, "Apply (128 - M_L)^2 without the 1/256 scaling");
  sub->add_option("--detector", o.detector, "Edge detector: phase-congruency | gradient-hysteresis")
      ->capture_default_str();
}

struct MaskDump {
  std::string png;
  std::string csv;
  std::vector<int> rows{32};
};

void add_mask_dump_options(CLI::App* sub, MaskDump& d) {
  sub->add_option("--mask-png", d.png, "Write the normalized mask as an image");
  sub->add_option("--mask-csv", d.csv, "Write normalized mask rows as CSV");
  sub->add_option("--mask-rows", d.rows, "Block rows for --mask-csv")->delimiter(',')->capture_default_str();
}

void write_mask_dump(const JndMask& mask, const MaskDump& d, Json& outputs) {
  if (!d.png.empty()) {
    save_image(mask_to_image(mask), d.png);
    outputs["mask_png"] = d.png;
  }
  if (!d.csv.empty()) {
    dump_mask_rows(mask, d.rows, d.csv);
    outputs["mask_csv"] = d.csv;
  }
}

std::pair<int, int> parse_size(const std::string& text) {
  if (text.empty()) throw Error(ErrorCode::MissingSize, "--wm-size is required (e.g. 12x12)");
  const auto x = text.find_first_of("xX");
  if (x == std::string::npos) throw Error(ErrorCode::MissingSize, "--wm-size must look like WxH, got '" + text + "'");
  try {
    std::size_t used_w = 0;
    std::size_t used_h = 0;
    const int w = std::stoi(text.substr(0, x), &used_w);
    const int h = std::stoi(text.substr(x + 1), &used_h);
    if (used_w != x || used_h != text.size() - x - 1) throw std::invalid_argument("trailing");
    if (w <= 0 || h <= 0) throw Error(ErrorCode::MissingSize, "--wm-size must be positive, got '" + text + "'");
    return {w, h};
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::MissingSize, "--wm-size must look like WxH, got '" + text + "'");
  }
}

double parse_number(const std::string& token) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::logic_error&) {
    used = 0;
  }
  if (used != token.size() || !std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "not a number: '" + token + "'");
  return v;
}

// Each token is a value or an inclusive range `start:stop:step`.
std::vector<double> expand_list(const std::vector<std::string>& tokens) {
  std::vector<double> out;
  for (const auto& tok : tokens) {
    if (tok.empty()) continue;
    std::vector<std::string> parts;
    std::stringstream ss(tok);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() == 1) {
      out.push_back(parse_number(parts[0]));
      continue;
    }
    if (parts.size() != 3) throw Error(ErrorCode::InvalidArgument, "range must be start:stop:step, got '" + tok + "'");
    const double start = parse_number(parts[0]);
    const double stop = parse_number(parts[1]);
    const double step = parse_number(parts[2]);
    if (!(step > 0.0) || stop < start) throw Error(ErrorCode::InvalidArgument, "empty or unbounded range '" + tok + "'");
    // Count in integers to avoid accumulating the step's rounding error.
    const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(start + static_cast<double>(i) * step);
  }
  return out;
}

// ---- embed -----------------------------------------------------------------

struct EmbedArgs {
  std::string cover;
  std::string watermark;
  std::string output;
  std::string manifest;
  ConfigOptions cfg;
  MaskDump dump;
};

void run_embed(const EmbedArgs& a) {
  const EmbedConfig cfg = a.cfg.resolve();
  const GrayImage cover = load_image(a.cover);
  const WatermarkBitmap wm = load_watermark(a.watermark);
  const EmbedResult res = embed_detailed(cover, wm, cfg);
  save_image(res.watermarked, a.output);
  const QualityReport q = evaluate(cover, res.watermarked);

  Json m = manifest("embed");
  m["inputs"] = Json{{"cover", a.cover}, {"watermark", a.watermark}};
  m["config"] = to_json(cfg);
  m["config"]["watermark_size"] = Json{{"width", wm.width()}, {"height", wm.height()}};
  m["outputs"]["watermarked"] = a.output;
  write_mask_dump(res.mask, a.dump, m["outputs"]);
  m["metrics"] = to_json(q);
  m["metrics"]["sequence_wraps"] = res.sequence_wraps;
  const auto path = a.manifest.empty() ? manifest_path_for(a.output) : std::filesystem::path(a.manifest);
  m["outputs"]["manifest"] = path.string();
  write_json(m, path);

  std::cout << "wrote " << a.output << "  psnr_db=" << fixed6(q.psnr_db) << "  wpsnr_db=" << fixed6(q.wpsnr_db) << "\n";
}

// ---- extract ---------------------------------------------------------------

struct ExtractArgs {
  std::string image;
  std::string wm_size;
  std::string reference;
  std::string output;
  std::string report;
  ConfigOptions cfg;
};

void run_extract(const ExtractArgs& a) {
  const EmbedConfig cfg = a.cfg.resolve();
  std::optional<WatermarkBitmap> reference;
  if (!a.reference.empty()) reference = load_watermark(a.reference);
  auto [w, h] = (a.wm_size.empty() && reference) ? std::pair{reference->width(), reference->height()}
                                                 : parse_size(a.wm_size);
  const GrayImage img = load_image(a.image);
  const CorrelationReport r = extract(img, w, h, cfg, reference);

  Json m = manifest("extract");
  m["inputs"] = Json{{"image", a.image}};
  if (reference) m["inputs"]["reference"] = a.reference;
  m["config"] = Json{{"prime_q", cfg.prime_q}, {"threshold", cfg.threshold}, {"wm_width", w}, {"wm_height", h}};
  m["metrics"] = to_json(r);

  if (a.output.empty()) {
    std::cout << m.dump(2) << "\n";
    return;
  }
  save_watermark(r.recovered, a.output);
  m["outputs"]["recovered"] = a.output;
  const auto path = a.report.empty() ? manifest_path_for(a.output) : std::filesystem::path(a.report);
  m["outputs"]["report"] = path.string();
  write_json(m, path);
  std::cout << "wrote " << a.output;
  if (r.ber) std::cout << "  ber=" << fixed6(*r.ber);
  std::cout << "\n";
}

// ---- attack ----------------------------------------------------------------

struct AttackArgs {
  std::string image;
  std::string spec;
  std::string output;
  std::string manifest;
  std::optional<std::uint64_t> seed;
};

void run_attack(const AttackArgs& a) {
  AttackSpec spec = AttackSpec::parse(a.spec);
  if (a.seed) spec.seed = *a.seed;
  spec.validate();
  const GrayImage img = load_image(a.image);
  const AttackResult res = apply_attack(img, spec);
  save_image(res.attacked, a.output);

  Json m = manifest("attack");
  m["inputs"] = Json{{"image", a.image}};
  m["config"] = to_json(res.spec);
  m["outputs"]["attacked"] = a.output;
  m["metrics"] = to_json(evaluate(img, res.attacked));
  const auto path = a.manifest.empty() ? manifest_path_for(a.output) : std::filesystem::path(a.manifest);
  m["outputs"]["manifest"] = path.string();
  write_json(m, path);
  std::cout << "wrote " << a.output << "  " << res.spec.to_string() << "\n";
}

// ---- sweep -----------------------------------------------------------------

struct SweepArgs {
  std::string cover;
  std::string watermark;
  std::string output;
  std::string manifest;
  std::vector<std::string> betas;
  std::vector<std::string> jpeg_qs;
  ConfigOptions cfg;
};

void run_sweep(const SweepArgs& a) {
  const std::vector<double> betas = expand_list(a.betas);
  const std::vector<double> qualities = expand_list(a.jpeg_qs);
  if (betas.empty() && qualities.empty()) throw Error(ErrorCode::EmptySweep, "give --betas or --jpeg-qs with at least one value");

  EmbedConfig cfg = a.cfg.resolve();
  cfg.validate();
  for (double b : betas) {
    if (b < 0.0) throw Error(ErrorCode::InvalidArgument, "beta must be >= 0");
  }
  std::vector<int> qs;
  for (double v : qualities) {
    const auto qi = static_cast<int>(v);
    if (static_cast<double>(qi) != v || qi < 1 || qi > 100) {
      throw Error(ErrorCode::QualityOutOfRange, "JPEG quality must be an integer in 1..100, got " + fixed6(v));
    }
    qs.push_back(qi);
  }

  const GrayImage cover = load_image(a.cover);
  const WatermarkBitmap wm = load_watermark(a.watermark);
  require_block_aligned(cover);
  (void)DSequence(cfg.prime_q, 1);
  // The mask depends only on the cover.
  const JndMask mask = compute_mask(cover, transform_image(cover), cfg);

  std::ostringstream csv;
  Json rows = Json::array();
  if (!betas.empty()) {
    csv << "beta,psnr_db,wpsnr_db,clean_ber\n";
    for (double b : betas) {
      EmbedConfig c = cfg;
      c.beta = b;
      const GrayImage marked = embed_with_mask(cover, wm, c, mask).watermarked;
      const QualityReport q = evaluate(cover, marked);
      const double clean = *extract(marked, wm.width(), wm.height(), c, wm).ber;
      csv << fixed6(b) << ',' << fixed6(q.psnr_db) << ',' << fixed6(q.wpsnr_db) << ',' << fixed6(clean) << '\n';
      rows.push_back(Json{{"beta", b}, {"psnr_db", number(q.psnr_db)}, {"wpsnr_db", number(q.wpsnr_db)}, {"clean_ber", clean}});
    }
  } else {
    const GrayImage marked = embed_with_mask(cover, wm, cfg, mask).watermarked;
    csv << "quality,ber\n";
    for (int qv : qs) {
      const GrayImage attacked = jpeg_attack(marked, qv).attacked;
      const double e = *extract(attacked, wm.width(), wm.height(), cfg, wm).ber;
      csv << qv << ',' << fixed6(e) << '\n';
      rows.push_back(Json{{"quality", qv}, {"ber", e}});
    }
  }

  if (a.output.empty()) {
    std::cout << csv.str();
    return;
  }
  write_text(csv.str(), a.output);
  Json m = manifest("sweep");
  m["inputs"] = Json{{"cover", a.cover}, {"watermark", a.watermark}};
  m["config"] = to_json(cfg);
  m["config"]["sweep"] = betas.empty() ? Json{{"jpeg_qs", qs}} : Json{{"betas", betas}};
  m["outputs"]["csv"] = a.output;
  m["metrics"]["rows"] = rows;
  const auto path = a.manifest.empty() ? manifest_path_for(a.output) : std::filesystem::path(a.manifest);
  m["outputs"]["manifest"] = path.string();
  write_json(m, path);
  std::cout << "wrote " << a.output << " (" << rows.size() << " rows)\n";
}

// ---- evaluate / presence / features ----------------------------------------

struct EvaluateArgs {
  std::string original;
  std::string modified;
  std::string output;
};

void run_evaluate(const EvaluateArgs& a) {
  const QualityReport q = evaluate(load_image(a.original), load_image(a.modified));
  const Json j = to_json(q);
  if (!a.output.empty()) write_json(j, a.output);
  std::cout << j.dump(2) << "\n";
}

struct PresenceArgs {
  std::string image;
  std::optional<double> null_threshold;
  ConfigOptions cfg;
};

void run_presence(const PresenceArgs& a) {
  EmbedConfig cfg;
  cfg.prime_q = a.cfg.q;
  const PresenceStatistic p = detect_presence(load_image(a.image), cfg);
  Json j = to_json(p);
  j["prime_q"] = cfg.prime_q;
  if (a.null_threshold) {
    j["null_threshold"] = *a.null_threshold;
    j["present"] = p.mean_abs_c > *a.null_threshold;
  }
  std::cout << j.dump(2) << "\n";
}

struct FeaturesArgs {
  std::string image;
  std::string edges;
  std::string corners;
  ConfigOptions cfg;
  MaskDump dump;
};

GrayImage corner_overlay(const EdgeMap& edges, const CornerMap& corners) {
  GrayImage out(edges.width(), edges.height(), 255);
  for (int y = 0; y < edges.height(); ++y) {
    for (int x = 0; x < edges.width(); ++x) {
      if (edges.at(x, y)) out.at(x, y) = 160;
    }
  }
  for (const auto& c : corners.points) {
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int x = c.x + dx;
        const int y = c.y + dy;
        if (x >= 0 && y >= 0 && x < out.width() && y < out.height()) out.at(x, y) = 0;
      }
    }
  }
  return out;
}

void run_features(const FeaturesArgs& a) {
  const EmbedConfig cfg = a.cfg.resolve();
  cfg.validate();
  const GrayImage img = load_image(a.image);
  require_block_aligned(img);
  const EdgeMap edges = detect_edges(img, cfg.detector);
  const CornerMap corners = detect_corners(img, edges, cfg.css);
  const FeatureGrid features = extract_features(img, transform_image(img), cfg.detector, cfg.css);
  const JndMask mask = build_mask(features, cfg.luminance_mode, cfg.luminance_scaling);

  Json outputs = Json::object();
  if (!a.edges.empty()) {
    save_image(edge_map_to_image(edges), a.edges);
    outputs["edges"] = a.edges;
  }
  if (!a.corners.empty()) {
    save_image(corner_overlay(edges, corners), a.corners);
    outputs["corners"] = a.corners;
  }
  write_mask_dump(mask, a.dump, outputs);

  Json j;
  j["detector"] = to_json(cfg.detector);
  j["edge_pixels"] = edges.count();
  j["corners"] = corners.points.size();
  j["outputs"] = outputs;
  std::cout << j.dump(2) << "\n";
}

}  // namespace

void register_commands(CLI::App& app) {
  {
    auto a = std::make_shared<EmbedArgs>();
    auto* sub = app.add_subcommand("embed", "Embed a binary watermark into a cover image");
    sub->add_option("cover", a->cover, "Cover image (PGM or PNG)")->required();
    sub->add_option("watermark", a->watermark, "Watermark bitmap (PBM, or an image binarized at 128)")->required();
    sub->add_option("-o,--output", a->output, "Watermarked image (.pgm or .png)")->required();
    sub->add_option("--manifest", a->manifest, "Manifest path (default: <output>.json)");
    sub->add_option("--beta", a->cfg.beta, "Scaling factor")->capture_default_str();
    add_key_option(sub, a->cfg);
    add_mask_options(sub, a->cfg);
    add_mask_dump_options(sub, a->dump);
    sub->callback([a] { run_embed(*a); });
  }
  {
    auto a = std::make_shared<ExtractArgs>();
    auto* sub = app.add_subcommand("extract", "Blindly extract a watermark by correlation");
    sub->add_option("image", a->image, "Possibly attacked watermarked image")->required();
    sub->add_option("--wm-size", a->wm_size, "Watermark size as WxH (taken from --reference if omitted)");
    sub->add_option("--threshold", a->cfg.threshold, "Decision level T")->capture_default_str();
    sub->add_option("--reference", a->reference, "Original watermark, to report the bit error rate");
    sub->add_option("-o,--output", a->output, "Recovered watermark (.pbm); JSON goes to stdout when omitted");
    sub->add_option("--report", a->report, "Report path (default: <output>.json)");
    add_key_option(sub, a->cfg);
    sub->callback([a] { run_extract(*a); });
  }
  {
    auto a = std::make_shared<AttackArgs>();
    auto* sub = app.add_subcommand("attack", "Apply one attack, e.g. jpeg:q=45 or gauss:var=2%:seed=1");
    sub->add_option("image", a->image, "Input image")->required();
    sub->add_option("spec", a->spec, "Attack specification")->required();
    sub->add_option("-o,--output", a->output, "Attacked image")->required();
    sub->add_option("--seed", a->seed, "Override the seed of a stochastic attack");
    sub->add_option("--manifest", a->manifest, "Manifest path (default: <output>.json)");
    sub->callback([a] { run_attack(*a); });
  }
  {
    auto a = std::make_shared<SweepArgs>();
    auto* sub = app.add_subcommand("sweep", "Quality-vs-beta or BER-vs-JPEG-quality curve as CSV");
    sub->add_option("cover", a->cover, "Cover image")->required();
    sub->add_option("watermark", a->watermark, "Watermark bitmap")->required();
    auto* betas = sub->add_option("--betas", a->betas, "Betas: values and start:stop:step ranges")->delimiter(',');
    sub->add_option("--jpeg-qs", a->jpeg_qs, "JPEG qualities to attack the embedding with")
        ->delimiter(',')
        ->excludes(betas);
    sub->add_option("--beta", a->cfg.beta, "Embedding beta for --jpeg-qs")->capture_default_str();
    sub->add_option("-o,--output", a->output, "CSV path; stdout when omitted");
    sub->add_option("--manifest", a->manifest, "Manifest path (default: <output>.json)");
    add_key_option(sub, a->cfg);
    add_mask_options(sub, a->cfg);
    sub->callback([a] { run_sweep(*a); });
  }
  {
    auto a = std::make_shared<EvaluateArgs>();
    auto* sub = app.add_subcommand("evaluate", "MSE, PSNR and WPSNR of a modified image against its original");
    sub->add_option("original", a->original, "Reference image (NVF is taken from it)")->required();
    sub->add_option("modified", a->modified, "Modified image")->required();
    sub->add_option("-o,--output", a->output, "Also write the JSON here");
    sub->callback([a] { run_evaluate(*a); });
  }
  {
    auto a = std::make_shared<PresenceArgs>();
    auto* sub = app.add_subcommand("presence", "Mean |C(b)| presence statistic for a key");
    sub->add_option("image", a->image, "Image to test")->required();
    sub->add_option("--null-threshold", a->null_threshold, "Report present when the statistic exceeds this");
    add_key_option(sub, a->cfg);
    sub->callback([a] { run_presence(*a); });
  }
  {
    auto a = std::make_shared<FeaturesArgs>();
    auto* sub = app.add_subcommand("features", "Dump edge, corner and mask maps for inspection");
    sub->add_option("image", a->image, "Cover image")->required();
    sub->add_option("--edges", a->edges, "Edge map image");
    sub->add_option("--corners", a->corners, "Corner overlay image");
    add_mask_options(sub, a->cfg);
    add_mask_dump_options(sub, a->dump);
    sub->callback([a] { run_features(*a); });
  }
}

}  // namespace dseqmark::cli
