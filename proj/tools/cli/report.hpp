#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "dseqmark/attacks.hpp"
#include "dseqmark/metrics.hpp"
#include "dseqmark/watermark.hpp"

namespace dseqmark::cli {

using Json = nlohmann::ordered_json;

/// Finite values as numbers, infinities as "inf" / "-inf".
Json number(double v);

Json to_json(const EmbedConfig& cfg);
Json to_json(const DetectorChoice& detector);
Json to_json(const CssParams& css);
Json to_json(const AttackSpec& spec);
Json to_json(const QualityReport& q);
Json to_json(const CorrelationReport& r);
Json to_json(const PresenceStatistic& p);

/// Skeleton every manifest starts from.
Json manifest(const std::string& command);

void write_json(const Json& j, const std::filesystem::path& path);
void write_text(const std::string& text, const std::filesystem::path& path);

/// Sibling path for a manifest: `out.png` -> `out.png.json`.
std::filesystem::path manifest_path_for(const std::filesystem::path& output);

/// %.6f
std::string fixed6(double v);

}  // namespace dseqmark::cli
