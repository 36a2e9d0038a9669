// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mae/corpus.hpp"

namespace mae::data {

/// String ↔ contiguous index mapping with occurrence counts.
class Vocabulary {
 public:
  /// Appends an entry; throws CatalogError on duplicates.
  std::size_t add(std::string entry, std::size_t count);

  std::optional<std::size_t> find(const std::string& entry) const;
  /// Index of entry or CatalogError.
  std::size_t index(const std::string& entry) const;
  const std::string& entry(std::size_t index) const { return entries_.at(index); }
  std::size_t count(std::size_t index) const { return counts_.at(index); }
  std::span<const std::size_t> counts() const noexcept { return counts_; }
  std::span<const std::string> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t total() const noexcept { return total_; }

  /// Builds from tallies; indices follow descending count, ties ascending string.
  static Vocabulary from_counts(const std::unordered_map<std::string, std::size_t>& counts,
                                std::span<const std::string> reserved = {});

  friend bool operator==(const Vocabulary&, const Vocabulary&) = default;

 private:
  std::vector<std::string> entries_;
  std::vector<std::size_t> counts_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t total_ = 0;
};

inline constexpr std::size_t kUnknownToken = 0;
inline constexpr std::size_t kPaddingToken = 1;
inline constexpr const char* kUnknownTokenText = "<unk>";
inline constexpr const char* kPaddingTokenText = "<pad>";

/// Vocabularies built from the training split. Reserved token entries carry
/// count 0; every other count is positive.
struct Catalogs {
  Vocabulary attributes;
  Vocabulary values;
  Vocabulary tokens;
  /// attribute index → (value index → co-occurrence count).
  std::vector<std::map<std::size_t, std::size_t>> attribute_values;

  /// Values observed with the attribute in training, ascending index.
  std::vector<std::size_t> values_for(std::size_t attribute) const;
  std::vector<std::size_t> token_ids(const std::vector<std::string>& tokens) const;

  friend bool operator==(const Catalogs&, const Catalogs&) = default;
};

Catalogs build_catalogs(std::span<const ProductRecord> train);

/// count → number of entries having that count.
std::map<std::size_t, std::size_t> count_histogram(const Vocabulary& vocab);

// Export layout in a directory: attributes.tsv, values.tsv, tokens.tsv each
// hold "entry<TAB>index<TAB>count" lines; attribute_values.tsv holds
// "attribute<TAB>value<TAB>count". Entries are TSV-escaped.
void export_catalogs(const Catalogs& catalogs, const std::filesystem::path& dir);
Catalogs import_catalogs(const std::filesystem::path& dir);
void export_histograms(const Catalogs& catalogs, const std::filesystem::path& dir);

}  // namespace mae::data
