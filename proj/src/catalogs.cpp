// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#include "mae/catalogs.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "mae/errors.hpp"
#include "mae/tokenizer.hpp"
#include "mae/util.hpp"

namespace mae::data {
namespace fs = std::filesystem;

std::size_t Vocabulary::add(std::string entry, std::size_t count) {
  if (index_.contains(entry)) throw CatalogError("duplicate catalog entry '" + entry + "'");
  const std::size_t i = entries_.size();
  index_.emplace(entry, i);
  entries_.push_back(std::move(entry));
  counts_.push_back(count);
  total_ += count;
  return i;
}

std::optional<std::size_t> Vocabulary::find(const std::string& entry) const {
  auto it = index_.find(entry);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Vocabulary::index(const std::string& entry) const {
  auto i = find(entry);
  if (!i) throw CatalogError("'" + entry + "' is not in the catalog");
  return *i;
}

Vocabulary Vocabulary::from_counts(const std::unordered_map<std::string, std::size_t>& counts,
                                   std::span<const std::string> reserved) {
  Vocabulary v;
  for (const auto& r : reserved) v.add(r, 0);
  std::vector<std::pair<std::string, std::size_t>> sorted(counts.begin(), counts.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  for (auto& [entry, count] : sorted) v.add(std::move(entry), count);
  return v;
}

std::vector<std::size_t> Catalogs::values_for(std::size_t attribute) const {
  std::vector<std::size_t> out;
  if (attribute >= attribute_values.size()) return out;
  for (const auto& [v, c] : attribute_values[attribute]) out.push_back(v);
  return out;
}

std::vector<std::size_t> Catalogs::token_ids(const std::vector<std::string>& toks) const {
  std::vector<std::size_t> ids;
  ids.reserve(toks.size());
  for (const auto& t : toks) ids.push_back(tokens.find(t).value_or(kUnknownToken));
  return ids;
}

Catalogs build_catalogs(std::span<const ProductRecord> train) {
  if (train.empty()) throw InsufficientDataError("cannot build catalogs from an empty training split");
  std::unordered_map<std::string, std::size_t> attr_counts, value_counts, token_counts;
  for (const auto& r : train) {
    for (const auto& p : r.pairs) {
      ++attr_counts[p.attribute];
      ++value_counts[p.value];
    }
    for (const auto& t : tokenize(r.description)) ++token_counts[t];
  }
  // Reserved spellings never come out of the tokenizer ('<' is punctuation).
  const std::string reserved[] = {kUnknownTokenText, kPaddingTokenText};

  Catalogs c;
  c.attributes = Vocabulary::from_counts(attr_counts);
  c.values = Vocabulary::from_counts(value_counts);
  c.tokens = Vocabulary::from_counts(token_counts, reserved);
  c.attribute_values.resize(c.attributes.size());
  for (const auto& r : train) {
    for (const auto& p : r.pairs) ++c.attribute_values[c.attributes.index(p.attribute)][c.values.index(p.value)];
  }
  return c;
}

std::map<std::size_t, std::size_t> count_histogram(const Vocabulary& vocab) {
  std::map<std::size_t, std::size_t> h;
  for (auto c : vocab.counts())
    if (c > 0) ++h[c];
  return h;
}

namespace {

void write_vocab(const Vocabulary& v, const fs::path& path) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out += escape_tsv(v.entry(i)) + "\t" + std::to_string(i) + "\t" + std::to_string(v.count(i)) + "\n";
  }
  write_text_file(path, out);
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> cols;
  std::size_t start = 0;
  while (true) {
    auto tab = line.find('\t', start);
    cols.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return cols;
}

std::size_t parse_count(const std::string& text, const std::string& source, std::size_t line) {
  try {
    std::size_t used = 0;
    auto v = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw FormatError(source, line, "expected a non-negative integer, got '" + text + "'");
  }
}

Vocabulary read_vocab(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingArtifactError(path.string(), "preprocess");
  Vocabulary v;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cols = split_tabs(line);
    if (cols.size() != 3) throw FormatError(path.string(), lineno, "expected entry<TAB>index<TAB>count");
    const auto idx = parse_count(cols[1], path.string(), lineno);
    if (idx != v.size()) throw FormatError(path.string(), lineno, "indices must be contiguous from 0");
    v.add(unescape_tsv(cols[0]), parse_count(cols[2], path.string(), lineno));
  }
  return v;
}

}  // namespace

void export_catalogs(const Catalogs& c, const fs::path& dir) {
  write_vocab(c.attributes, dir / "attributes.tsv");
  write_vocab(c.values, dir / "values.tsv");
  write_vocab(c.tokens, dir / "tokens.tsv");
  std::string out;
  for (std::size_t a = 0; a < c.attribute_values.size(); ++a) {
    for (const auto& [v, n] : c.attribute_values[a]) {
      out += escape_tsv(c.attributes.entry(a)) + "\t" + escape_tsv(c.values.entry(v)) + "\t" + std::to_string(n) + "\n";
    }
  }
  write_text_file(dir / "attribute_values.tsv", out);
}

Catalogs import_catalogs(const fs::path& dir) {
  Catalogs c;
  c.attributes = read_vocab(dir / "attributes.tsv");
  c.values = read_vocab(dir / "values.tsv");
  c.tokens = read_vocab(dir / "tokens.tsv");
  if (c.tokens.size() < 2 || c.tokens.entry(kUnknownToken) != kUnknownTokenText ||
      c.tokens.entry(kPaddingToken) != kPaddingTokenText) {
    throw FormatError((dir / "tokens.tsv").string(), 0, "reserved tokens missing at indices 0 and 1");
  }
  c.attribute_values.resize(c.attributes.size());
  const fs::path av = dir / "attribute_values.tsv";
  std::ifstream in(av);
  if (!in) throw MissingArtifactError(av.string(), "preprocess");
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cols = split_tabs(line);
    if (cols.size() != 3) throw FormatError(av.string(), lineno, "expected attribute<TAB>value<TAB>count");
    const auto a = c.attributes.find(unescape_tsv(cols[0]));
    const auto v = c.values.find(unescape_tsv(cols[1]));
    if (!a || !v) throw FormatError(av.string(), lineno, "unknown attribute or value");
    c.attribute_values[*a][*v] = parse_count(cols[2], av.string(), lineno);
  }
  return c;
}

void export_histograms(const Catalogs& c, const fs::path& dir) {
  auto render = [](const Vocabulary& v) {
    std::string out = "count\tentries\n";
    for (const auto& [count, n] : count_histogram(v)) out += std::to_string(count) + "\t" + std::to_string(n) + "\n";
    return out;
  };
  write_text_file(dir / "attribute_histogram.tsv", render(c.attributes));
  write_text_file(dir / "value_histogram.tsv", render(c.values));
}

}  // namespace mae::data
