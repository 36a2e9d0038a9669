// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#include "mae/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <unordered_map>

#include "mae/errors.hpp"
#include "mae/util.hpp"

namespace mae::data {
namespace fs = std::filesystem;

void NormalizationRules::add(const std::string& pattern, std::string canonical, bool ignore_case) {
  auto flags = std::regex::ECMAScript;
  if (ignore_case) flags |= std::regex::icase;
  try {
    rules_.push_back({std::regex(pattern, flags), std::move(canonical)});
  } catch (const std::regex_error& e) {
    throw ConfigError("malformed normalization pattern '" + pattern + "': " + e.what());
  }
}

NormalizationRules NormalizationRules::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open normalization rules " + path.string());
  NormalizationRules rules;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, '\t')) cols.push_back(col);
    if (cols.size() < 2 || cols.size() > 3) {
      throw FormatError(path.string(), lineno, "expected pattern<TAB>canonical[<TAB>i]");
    }
    const bool icase = cols.size() == 3 && cols[2] == "i";
    try {
      rules.add(cols[0], cols[1], icase);
    } catch (const ConfigError& e) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return rules;
}

std::optional<std::string> NormalizationRules::canonical(const std::string& attribute) const {
  for (const auto& rule : rules_) {
    if (std::regex_search(attribute, rule.pattern)) return rule.canonical;
  }
  return std::nullopt;
}

std::vector<ProductRecord> normalize_attributes(std::vector<ProductRecord> records, const NormalizationRules& rules) {
  if (rules.size() == 0) return records;
  std::unordered_map<std::string, std::string> memo;
  for (auto& r : records) {
    for (auto& p : r.pairs) {
      auto it = memo.find(p.attribute);
      if (it == memo.end()) {
        it = memo.emplace(p.attribute, rules.canonical(p.attribute).value_or(p.attribute)).first;
      }
      p.attribute = it->second;
    }
  }
  return records;
}

namespace {

// One counting pass; returns whether any pair was removed.
bool filter_once(std::vector<ProductRecord>& records, const FilterThresholds& t) {
  std::unordered_map<std::string, std::size_t> attr_count;
  std::unordered_map<std::string, std::size_t> value_count;
  std::unordered_map<std::string, std::unordered_map<std::string, std::size_t>> attr_value_count;
  for (const auto& r : records) {
    for (const auto& p : r.pairs) {
      ++attr_count[p.attribute];
      ++value_count[p.value];
      ++attr_value_count[p.attribute][p.value];
    }
  }
  std::unordered_map<std::string, bool> dominated;
  for (const auto& [attr, values] : attr_value_count) {
    std::size_t top = 0;
    for (const auto& [v, c] : values) top = std::max(top, c);
    dominated[attr] = static_cast<double>(top) > t.dominance * static_cast<double>(attr_count[attr]);
  }

  bool removed = false;
  for (auto& r : records) {
    const auto before = r.pairs.size();
    std::erase_if(r.pairs, [&](const AttributeValue& p) {
      return attr_count[p.attribute] < t.min_attribute_count || value_count[p.value] < t.min_value_count ||
             dominated[p.attribute];
    });
    if (r.pairs.size() != before) {
      removed = true;
      if (r.pairs.empty()) r.flagged = true;
    }
  }
  return removed;
}

}  // namespace

std::vector<ProductRecord> filter_pairs(std::vector<ProductRecord> records, const FilterThresholds& thresholds) {
  if (thresholds.min_attribute_count == 0 || thresholds.min_value_count == 0) {
    throw ConfigError("filter thresholds must be positive");
  }
  if (!(thresholds.dominance > 0.0 && thresholds.dominance <= 1.0)) {
    throw ConfigError("dominance threshold must lie in (0, 1]");
  }
  while (filter_once(records, thresholds) && thresholds.fixed_point) {
  }
  return records;
}

std::vector<ProductRecord> select_top_attributes(std::vector<ProductRecord> records, std::size_t n) {
  if (n == 0) throw ConfigError("select_top_attributes needs n >= 1");
  std::map<std::string, std::size_t> counts;
  for (const auto& r : records)
    for (const auto& p : r.pairs) ++counts[p.attribute];
  if (counts.size() <= n) return records;

  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  std::unordered_map<std::string, bool> keep;
  for (std::size_t i = 0; i < ranked.size(); ++i) keep[ranked[i].first] = i < n;
  for (auto& r : records) std::erase_if(r.pairs, [&](const AttributeValue& p) { return !keep[p.attribute]; });
  return records;
}

std::array<std::size_t, 3> split_sizes(std::size_t n, const SplitRatios& ratios) {
  if (!(ratios.train > 0 && ratios.validation > 0 && ratios.test > 0)) throw ConfigError("split ratios must be positive");
  if (std::abs(ratios.train + ratios.validation + ratios.test - 1.0) > 1e-9) {
    throw ConfigError("split ratios must sum to 1");
  }
  // Cuts sit at floor(n·train) and floor(n·(train+validation)); the epsilon
  // keeps exact products such as 0.1·10 from flooring one short.
  const double dn = static_cast<double>(n);
  const auto n_train = static_cast<std::size_t>(std::floor(ratios.train * dn + 1e-9));
  const auto second_cut = static_cast<std::size_t>(std::floor((ratios.train + ratios.validation) * dn + 1e-9));
  const std::size_t n_val = std::min(second_cut, n) - n_train;
  return {n_train, n_val, n - n_train - n_val};
}

SplitSet split_dataset(const std::vector<ProductRecord>& records, const SplitRatios& ratios, std::uint64_t seed) {
  if (records.size() < 3) {
    throw InsufficientDataError("splitting needs at least 3 records, got " + std::to_string(records.size()));
  }
  const auto sizes = split_sizes(records.size(), ratios);
  std::vector<std::string> ids;
  ids.reserve(records.size());
  for (const auto& r : records) ids.push_back(r.id);
  std::mt19937_64 rng(seed);
  std::shuffle(ids.begin(), ids.end(), rng);

  SplitSet s;
  s.seed = seed;
  s.train.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(sizes[0]));
  s.validation.assign(ids.begin() + static_cast<std::ptrdiff_t>(sizes[0]),
                      ids.begin() + static_cast<std::ptrdiff_t>(sizes[0] + sizes[1]));
  s.test.assign(ids.begin() + static_cast<std::ptrdiff_t>(sizes[0] + sizes[1]), ids.end());
  return s;
}

namespace {

void write_ids(const std::vector<std::string>& ids, const fs::path& path) {
  std::string out;
  for (const auto& id : ids) out += escape_tsv(id) + "\n";
  write_text_file(path, out);
}

std::vector<std::string> read_ids(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingArtifactError(path.string(), "preprocess");
  std::vector<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) ids.push_back(unescape_tsv(line));
  }
  return ids;
}

}  // namespace

void write_split(const SplitSet& split, const fs::path& dir) {
  write_ids(split.train, dir / "train.txt");
  write_ids(split.validation, dir / "validation.txt");
  write_ids(split.test, dir / "test.txt");
  write_text_file(dir / "seed.txt", std::to_string(split.seed) + "\n");
}

SplitSet read_split(const fs::path& dir) {
  SplitSet s;
  s.train = read_ids(dir / "train.txt");
  s.validation = read_ids(dir / "validation.txt");
  s.test = read_ids(dir / "test.txt");
  if (fs::exists(dir / "seed.txt")) s.seed = std::stoull(read_text_file(dir / "seed.txt"));
  return s;
}

SplitRecords apply_split(const std::vector<ProductRecord>& records, const SplitSet& split) {
  std::unordered_map<std::string, const ProductRecord*> by_id;
  for (const auto& r : records) by_id.emplace(r.id, &r);
  auto take = [&](const std::vector<std::string>& ids) {
    std::vector<ProductRecord> out;
    out.reserve(ids.size());
    for (const auto& id : ids) {
      auto it = by_id.find(id);
      if (it == by_id.end()) throw CorpusError("split references unknown record '" + id + "'");
      out.push_back(*it->second);
    }
    return out;
  };
  return {take(split.train), take(split.validation), take(split.test)};
}

}  // namespace mae::data
