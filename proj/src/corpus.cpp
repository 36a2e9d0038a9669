// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#include "mae/corpus.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>
#include <unordered_set>

#include "mae/errors.hpp"
#include "mae/util.hpp"

namespace mae::data {
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::vector<double> read_vector_file(const fs::path& path, const std::string& source, std::size_t line) {
  std::ifstream in(path);
  if (!in) throw FormatError(source, line, "cannot open image feature file " + path.string());
  std::vector<double> v;
  double x = 0.0;
  while (in >> x) v.push_back(x);
  if (!in.eof()) throw FormatError(source, line, "non-numeric content in " + path.string());
  return v;
}

ProductRecord parse_line(const std::string& line, const std::string& source, std::size_t lineno,
                         const fs::path& base_dir) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw FormatError(source, lineno, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw FormatError(source, lineno, "record must be a JSON object");

  ProductRecord r;
  try {
    if (!j.contains("id") || !j["id"].is_string()) throw FormatError(source, lineno, "missing string field 'id'");
    r.id = j["id"].get<std::string>();
    if (r.id.empty()) throw FormatError(source, lineno, "empty id");
    if (j.contains("description")) {
      if (!j["description"].is_string()) throw FormatError(source, lineno, "'description' must be a string");
      r.description = j["description"].get<std::string>();
    }
    if (j.contains("images")) {
      if (!j["images"].is_array()) throw FormatError(source, lineno, "'images' must be a list");
      for (const auto& img : j["images"]) {
        if (img.is_string()) {
          r.images.push_back(read_vector_file(base_dir / img.get<std::string>(), source, lineno));
        } else if (img.is_array()) {
          std::vector<double> v;
          v.reserve(img.size());
          for (const auto& x : img) {
            if (!x.is_number()) throw FormatError(source, lineno, "image vector holds a non-number");
            v.push_back(x.get<double>());
          }
          r.images.push_back(std::move(v));
        } else {
          throw FormatError(source, lineno, "image entry must be a list of numbers or a file path");
        }
        if (r.images.back().empty()) throw FormatError(source, lineno, "empty image feature vector");
      }
    }
    if (j.contains("pairs")) {
      if (!j["pairs"].is_array()) throw FormatError(source, lineno, "'pairs' must be a list");
      for (const auto& p : j["pairs"]) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string()) {
          throw FormatError(source, lineno, "each pair must be [attribute, value] strings");
        }
        r.pairs.push_back({p[0].get<std::string>(), p[1].get<std::string>()});
      }
    }
    if (j.contains("flagged")) r.flagged = j["flagged"].get<bool>();
  } catch (const json::exception& e) {
    throw FormatError(source, lineno, e.what());
  }
  return r;
}

}  // namespace

std::size_t validate_records(const std::vector<ProductRecord>& records) {
  std::unordered_set<std::string> ids;
  std::size_t dim = 0;
  for (const auto& r : records) {
    if (r.id.empty()) throw CorpusError("record with empty id");
    if (!ids.insert(r.id).second) throw CorpusError("duplicate record id '" + r.id + "'");
    for (const auto& img : r.images) {
      if (dim == 0) dim = img.size();
      if (img.size() != dim) {
        throw CorpusError("record '" + r.id + "' has an image feature of dimension " + std::to_string(img.size()) +
                          ", corpus dimension is " + std::to_string(dim));
      }
    }
  }
  return dim;
}

Corpus parse_corpus(std::string_view text, const std::string& source, const fs::path& base_dir) {
  Corpus corpus;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  std::unordered_set<std::string> ids;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ProductRecord r = parse_line(line, source, lineno, base_dir);
    if (!ids.insert(r.id).second) throw FormatError(source, lineno, "duplicate id '" + r.id + "'");
    for (const auto& img : r.images) {
      if (corpus.image_dim == 0) corpus.image_dim = img.size();
      if (img.size() != corpus.image_dim) {
        throw FormatError(source, lineno, "image dimension " + std::to_string(img.size()) + " differs from corpus dimension " +
                                             std::to_string(corpus.image_dim));
      }
    }
    corpus.records.push_back(std::move(r));
  }
  return corpus;
}

Corpus read_corpus(const fs::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error&) {
    throw CorpusError("cannot read corpus file " + path.string());
  }
  return parse_corpus(text, path.string(), path.parent_path());
}

std::string serialize_record(const ProductRecord& record) {
  json j;
  j["id"] = record.id;
  j["description"] = record.description;
  j["images"] = record.images;
  json pairs = json::array();
  for (const auto& p : record.pairs) pairs.push_back({p.attribute, p.value});
  j["pairs"] = std::move(pairs);
  if (record.flagged) j["flagged"] = true;
  return j.dump();
}

void write_corpus(const Corpus& corpus, const fs::path& path) {
  std::string out;
  for (const auto& r : corpus.records) {
    out += serialize_record(r);
    out += '\n';
  }
  write_text_file(path, out);
}

CorpusStats corpus_stats(const std::vector<ProductRecord>& records) {
  CorpusStats s;
  std::set<std::string> attrs, values;
  for (const auto& r : records) {
    ++s.products;
    s.images += r.images.size();
    s.pairs += r.pairs.size();
    if (r.flagged) ++s.flagged;
    for (const auto& p : r.pairs) {
      attrs.insert(p.attribute);
      values.insert(p.value);
    }
  }
  s.unique_attributes = attrs.size();
  s.unique_values = values.size();
  return s;
}

}  // namespace mae::data
