// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>

#include "mae/catalogs.hpp"
#include "mae/tensor.hpp"

namespace mae::data {

/// Pretrained word vectors. Rows 0 and 1 are the unknown and padding entries
/// (all zeros); file tokens follow in file order.
struct WordEmbeddings {
  Vocabulary tokens;
  Tensor table;

  std::size_t dim() const { return table.cols(); }
  /// Vector for a token; the unknown row when absent.
  std::span<const double> lookup(const std::string& token) const;
};

/// Reads "token v1 ... vd" lines. The first line fixes d; a line with any
/// other count raises FormatError naming that line.
WordEmbeddings load_word_embeddings(const std::filesystem::path& path);

/// Writes file tokens (reserved rows excluded) in the same text format,
/// using shortest round-trip decimal text.
void save_word_embeddings(const WordEmbeddings& embeddings, const std::filesystem::path& path);

/// Arranges pretrained vectors along a token catalog; tokens missing from the
/// file get zero rows.
Tensor align_embeddings(const WordEmbeddings& embeddings, const Vocabulary& catalog_tokens);

}  // namespace mae::data
