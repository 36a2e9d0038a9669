// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mae/evaluation.hpp"
#include "mae/fusion.hpp"

namespace mae::harness {

inline constexpr const char* kMostCommonLabel = "Most-Common Value";

/// Table row label for a fusion variant ("Text Baseline", ...).
std::string row_label(model::FusionVariant variant);

struct ReportRow {
  std::string label;
  std::string source;  // checkpoint or baseline directory
  EvaluationResult result;
};

/// Rows in insertion order plus free-form run metadata.
struct MetricsReport {
  std::vector<ReportRow> rows;
  nlohmann::json metadata = nlohmann::json::object();
};

nlohmann::json to_json(const MetricsReport& report);
MetricsReport report_from_json(const nlohmann::json& j);
void save_report(const MetricsReport& report, const std::filesystem::path& path);
MetricsReport load_report(const std::filesystem::path& path);

/// Aligned text table, one row per model, hits@k as percentages.
std::string render_table(const MetricsReport& report);
/// Per-attribute hits@k for one row.
std::string render_breakdown(const ReportRow& row);

/// Problems with a report: any hits@k outside [0, 1] or decreasing in k.
std::vector<std::string> check_report(const MetricsReport& report);

}  // namespace mae::harness
