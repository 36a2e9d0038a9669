// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#include "mae/report.hpp"

#include <algorithm>
#include <cstdio>

#include "mae/errors.hpp"
#include "mae/util.hpp"

namespace mae::harness {
using json = nlohmann::json;

std::string row_label(model::FusionVariant variant) {
  switch (variant) {
    case model::FusionVariant::image: return "Image Baseline";
    case model::FusionVariant::text: return "Text Baseline";
    case model::FusionVariant::concat: return "Multimodal Baseline - Concat";
    case model::FusionVariant::gmu: return "Multimodal Baseline - GMU";
  }
  return "?";
}

namespace {

json tally_json(const HitTally& t) {
  json hits = json::object();
  for (const auto& [k, rate] : t.rates()) hits[std::to_string(k)] = rate;
  json counts = json::object();
  for (const auto& [k, n] : t.hits) counts[std::to_string(k)] = n;
  return {{"queries", t.queries}, {"hits", hits}, {"hit_counts", counts}};
}

HitTally tally_from_json(const json& j) {
  HitTally t;
  t.queries = j.at("queries").get<std::size_t>();
  for (const auto& [k, n] : j.at("hit_counts").items()) t.hits[std::stoul(k)] = n.get<std::size_t>();
  return t;
}

std::string percent(double rate) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * rate);
  return buf;
}

std::string pad_right(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::vector<std::size_t> ks_of(const MetricsReport& report) {
  std::vector<std::size_t> ks;
  for (const auto& r : report.rows)
    for (const auto& [k, n] : r.result.overall.hits) ks.push_back(k);
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

std::string table(const std::vector<std::pair<std::string, const HitTally*>>& rows, const std::vector<std::size_t>& ks,
                  const std::string& first_header) {
  std::size_t width = first_header.size();
  for (const auto& [label, t] : rows) width = std::max(width, label.size());
  std::string out = pad_right(first_header, width);
  for (auto k : ks) out += "  " + pad_left("Hits@" + std::to_string(k), 8);
  out += "\n";
  for (const auto& [label, t] : rows) {
    out += pad_right(label, width);
    const auto rates = t->rates();
    for (auto k : ks) {
      const auto it = rates.find(k);
      out += "  " + pad_left(it == rates.end() ? "-" : percent(it->second), 8);
    }
    out += "\n";
  }
  return out;
}

}  // namespace

json to_json(const MetricsReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    json per = json::object();
    for (const auto& [a, t] : r.result.per_attribute) per[a] = tally_json(t);
    json row = tally_json(r.result.overall);
    row["label"] = r.label;
    row["source"] = r.source;
    row["per_attribute"] = per;
    rows.push_back(row);
  }
  return {{"rows", rows}, {"metadata", report.metadata}};
}

MetricsReport report_from_json(const json& j) {
  MetricsReport report;
  try {
    for (const auto& row : j.at("rows")) {
      ReportRow r;
      r.label = row.at("label").get<std::string>();
      r.source = row.value("source", std::string());
      r.result.overall = tally_from_json(row);
      for (const auto& [a, t] : row.at("per_attribute").items()) r.result.per_attribute[a] = tally_from_json(t);
      report.rows.push_back(std::move(r));
    }
    report.metadata = j.value("metadata", json::object());
  } catch (const json::exception& e) {
    throw FormatError("report", 0, e.what());
  }
  return report;
}

void save_report(const MetricsReport& report, const std::filesystem::path& path) {
  write_text_file(path, to_json(report).dump(2) + "\n");
}

MetricsReport load_report(const std::filesystem::path& path) {
  const json j = json::parse(read_text_file(path), nullptr, false);
  if (j.is_discarded()) throw FormatError(path.string(), 0, "report is not valid JSON");
  return report_from_json(j);
}

std::string render_table(const MetricsReport& report) {
  std::vector<std::pair<std::string, const HitTally*>> rows;
  for (const auto& r : report.rows) rows.emplace_back(r.label, &r.result.overall);
  return table(rows, ks_of(report), "Model");
}

std::string render_breakdown(const ReportRow& row) {
  std::vector<std::pair<std::string, const HitTally*>> rows;
  for (const auto& [a, t] : row.result.per_attribute) rows.emplace_back(a + " (" + std::to_string(t.queries) + ")", &t);
  std::vector<std::size_t> ks;
  for (const auto& [k, n] : row.result.overall.hits) ks.push_back(k);
  return table(rows, ks, "Attribute (queries)");
}

std::vector<std::string> check_report(const MetricsReport& report) {
  std::vector<std::string> problems;
  auto check = [&](const std::string& where, const HitTally& t) {
    double prev = 0.0;
    for (const auto& [k, rate] : t.rates()) {
      if (rate < 0.0 || rate > 1.0) problems.push_back(where + ": hits@" + std::to_string(k) + " outside [0, 1]");
      if (rate < prev) problems.push_back(where + ": hits@" + std::to_string(k) + " below a smaller k");
      prev = rate;
    }
  };
  for (const auto& r : report.rows) {
    check(r.label, r.result.overall);
    for (const auto& [a, t] : r.result.per_attribute) check(r.label + " / " + a, t);
  }
  return problems;
}

}  // namespace mae::harness
