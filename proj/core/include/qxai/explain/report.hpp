#pragma once

#include <filesystem>

#include "qxai/explain/aggregate.hpp"

namespace qxai::explain {

enum class ReportFormat { json, svg, html };

ReportFormat parse_format(const std::string& name);  // throws ConfigError on unknown

/// Global attention summary in report form: signed mean scores plus
/// normalized mean weights (both channels are always emitted).
struct AttentionGlobal {
  std::vector<std::string> feature_names;
  std::vector<double> mean_scores;
  std::vector<double> mean_weights;
  std::size_t n_instances = 0;
};

// Schema-versioned JSON, lossless round trip.
nlohmann::json to_json(const GlobalImportance& gi);
nlohmann::json to_json(const ForceDecomposition& fd);
nlohmann::json to_json(const GroupExplanation& ge);
nlohmann::json to_json(const AttentionGlobal& ag);
GlobalImportance global_importance_from_json(const nlohmann::json& j);
ForceDecomposition force_from_json(const nlohmann::json& j);
GroupExplanation group_from_json(const nlohmann::json& j);
AttentionGlobal attention_from_json(const nlohmann::json& j);

// json: versioned round-trippable object. svg: static horizontal bar chart
// (positive forces right/blue, negative left/red). html: svg + static table.
void write_report(const GlobalImportance& gi, ReportFormat format,
                  const std::filesystem::path& path);
void write_report(const ForceDecomposition& fd, ReportFormat format,
                  const std::filesystem::path& path);
void write_report(const GroupExplanation& ge, ReportFormat format,
                  const std::filesystem::path& path);
void write_report(const AttentionGlobal& ag, ReportFormat format,
                  const std::filesystem::path& path);

}  // namespace qxai::explain
