// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "mae/corpus.hpp"

namespace mae::data {

/// Ordered attribute rewrite rules; the first rule whose pattern matches
/// (regex search semantics) supplies the canonical name.
class NormalizationRules {
 public:
  void add(const std::string& pattern, std::string canonical, bool ignore_case = false);

  /// Rules file: one rule per line, "pattern<TAB>canonical[<TAB>i]". A third
  /// column of "i" makes the match case-insensitive. Lines starting with '#'
  /// and blank lines are ignored.
  static NormalizationRules load(const std::filesystem::path& path);

  std::optional<std::string> canonical(const std::string& attribute) const;
  std::size_t size() const noexcept { return rules_.size(); }

 private:
  struct Rule {
    std::regex pattern;
    std::string canonical;
  };
  std::vector<Rule> rules_;
};

std::vector<ProductRecord> normalize_attributes(std::vector<ProductRecord> records, const NormalizationRules& rules);

struct FilterThresholds {
  std::size_t min_attribute_count = 500;
  std::size_t min_value_count = 50;
  /// Attributes whose most common value covers more than this share are dropped.
  double dominance = 0.80;
  /// Repeat the counting pass until nothing changes.
  bool fixed_point = true;
};

/// Removes every pair whose attribute is rarer than min_attribute_count, whose
/// value string is rarer than min_value_count, or whose attribute is dominated
/// by a single value. Counts come from the pass's input. Records that lose all
/// their pairs are kept and flagged.
std::vector<ProductRecord> filter_pairs(std::vector<ProductRecord> records, const FilterThresholds& thresholds = {});

/// Keeps pairs whose attribute is among the n most frequent (ties broken by
/// ascending attribute string).
std::vector<ProductRecord> select_top_attributes(std::vector<ProductRecord> records, std::size_t n = 100);

struct SplitRatios {
  double train = 0.8;
  double validation = 0.1;
  double test = 0.1;
};

struct SplitSet {
  std::vector<std::string> train;
  std::vector<std::string> validation;
  std::vector<std::string> test;
  std::uint64_t seed = 0;
};

/// Part sizes from cuts at floor(n·train) and floor(n·(train + validation));
/// test takes the remainder. Every part lands within one record of its share.
std::array<std::size_t, 3> split_sizes(std::size_t n, const SplitRatios& ratios);

/// Shuffles record ids with the seeded generator and cuts at the cumulative ratios.
SplitSet split_dataset(const std::vector<ProductRecord>& records, const SplitRatios& ratios, std::uint64_t seed);

void write_split(const SplitSet& split, const std::filesystem::path& dir);
SplitSet read_split(const std::filesystem::path& dir);

struct SplitRecords {
  std::vector<ProductRecord> train;
  std::vector<ProductRecord> validation;
  std::vector<ProductRecord> test;
};

/// Materializes a split; every id must exist in records.
SplitRecords apply_split(const std::vector<ProductRecord>& records, const SplitSet& split);

}  // namespace mae::data
