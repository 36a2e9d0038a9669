// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#include "mae/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "mae/errors.hpp"
#include "mae/util.hpp"

namespace mae::data {
namespace fs = std::filesystem;

std::span<const double> WordEmbeddings::lookup(const std::string& token) const {
  return table.row(tokens.find(token).value_or(kUnknownToken));
}

WordEmbeddings load_word_embeddings(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path.string(), 0, "cannot open embedding file");
  const std::string source = path.string();

  std::vector<std::string> names;
  std::vector<double> data;
  std::size_t dim = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string token;
    fields >> token;
    std::vector<double> vec;
    std::string num;
    while (fields >> num) {
      double x = 0.0;
      auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), x);
      if (ec != std::errc() || ptr != num.data() + num.size()) {
        throw FormatError(source, lineno, "bad number '" + num + "'");
      }
      vec.push_back(x);
    }
    if (vec.empty()) throw FormatError(source, lineno, "token '" + token + "' has no vector");
    if (dim == 0) dim = vec.size();
    if (vec.size() != dim) {
      throw FormatError(source, lineno, "expected " + std::to_string(dim) + " components, got " + std::to_string(vec.size()));
    }
    names.push_back(std::move(token));
    data.insert(data.end(), vec.begin(), vec.end());
  }
  if (dim == 0) throw FormatError(source, 0, "embedding file is empty");

  WordEmbeddings e;
  e.tokens.add(kUnknownTokenText, 0);
  e.tokens.add(kPaddingTokenText, 0);
  for (auto& n : names) {
    if (e.tokens.find(n)) throw FormatError(source, 0, "duplicate token '" + n + "'");
    e.tokens.add(std::move(n), 1);
  }
  std::vector<double> table(2 * dim, 0.0);
  table.insert(table.end(), data.begin(), data.end());
  e.table = Tensor({e.tokens.size(), dim}, std::move(table));
  return e;
}

void save_word_embeddings(const WordEmbeddings& embeddings, const fs::path& path) {
  std::string out;
  for (std::size_t i = 2; i < embeddings.tokens.size(); ++i) {
    out += embeddings.tokens.entry(i);
    for (double v : embeddings.table.row(i)) out += " " + format_double(v);
    out += "\n";
  }
  write_text_file(path, out);
}

Tensor align_embeddings(const WordEmbeddings& embeddings, const Vocabulary& catalog_tokens) {
  Tensor t({catalog_tokens.size(), embeddings.dim()});
  for (std::size_t i = 0; i < catalog_tokens.size(); ++i) {
    if (i == kUnknownToken || i == kPaddingToken) continue;
    const auto src = embeddings.lookup(catalog_tokens.entry(i));
    std::ranges::copy(src, t.row(i).begin());
  }
  return t;
}

}  // namespace mae::data
