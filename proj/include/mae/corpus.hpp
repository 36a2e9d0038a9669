// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mae::data {

struct AttributeValue {
  std::string attribute;
  std::string value;

  friend bool operator==(const AttributeValue&, const AttributeValue&) = default;
};

/// One product: description text, image feature vectors and its open-schema
/// attribute table. Attributes may repeat within a record with different values.
struct ProductRecord {
  std::string id;
  std::string description;
  std::vector<std::vector<double>> images;
  std::vector<AttributeValue> pairs;
  /// Set when filtering left the record without pairs.
  bool flagged = false;

  friend bool operator==(const ProductRecord&, const ProductRecord&) = default;
};

struct Corpus {
  std::vector<ProductRecord> records;
  /// Shared image feature dimension; 0 when no record carries images.
  std::size_t image_dim = 0;
};

// Corpus files hold one JSON object per line:
//
//   {"id": "p1", "description": "...", "images": [[0.1, 0.2], "img/p1.vec"],
//    "pairs": [["color", "red"], ["length", "10 in"]], "flagged": true}
//
// An image entry is either an inline array of numbers or a path, relative to
// the corpus file, of a text file holding whitespace-separated numbers.
// "images", "pairs" and "flagged" are optional. Blank lines are skipped.

Corpus read_corpus(const std::filesystem::path& path);
Corpus parse_corpus(std::string_view text, const std::string& source,
                    const std::filesystem::path& base_dir = {});
void write_corpus(const Corpus& corpus, const std::filesystem::path& path);
std::string serialize_record(const ProductRecord& record);

/// Checks id uniqueness and the shared image dimension; returns that dimension.
std::size_t validate_records(const std::vector<ProductRecord>& records);

struct CorpusStats {
  std::size_t products = 0;
  std::size_t images = 0;
  std::size_t pairs = 0;
  std::size_t unique_attributes = 0;
  std::size_t unique_values = 0;
  std::size_t flagged = 0;
};

CorpusStats corpus_stats(const std::vector<ProductRecord>& records);

}  // namespace mae::data
