// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mae/catalogs.hpp"
#include "mae/config.hpp"
#include "mae/corpus.hpp"
#include "mae/model.hpp"
#include "mae/objective.hpp"

namespace mae::harness {

/// Hit counters; merging two tallies is plain addition, so the result does
/// not depend on how queries were split across workers.
struct HitTally {
  std::size_t queries = 0;
  std::map<std::size_t, std::size_t> hits;  // k → queries with gold in top k

  void add(std::optional<std::size_t> rank, std::span<const std::size_t> ks = model::kReportKs);
  void merge(const HitTally& other);
  model::HitsAtK rates() const;
};

struct EvaluationResult {
  HitTally overall;
  std::map<std::string, HitTally> per_attribute;
  void merge(const EvaluationResult& other);
};

/// 0-based rank of the gold value under cosine scoring with ties broken by
/// ascending index, or nullopt when gold is not a candidate.
std::optional<std::size_t> gold_rank(std::span<const double> context, const Tensor& values,
                                     std::span<const std::size_t> candidates, std::size_t gold);

/// Eval-mode decoding of every (product, attribute) pair in `records`.
/// Queries whose attribute or value never occurred in training count as misses.
EvaluationResult evaluate(const model::Model& model, const data::Catalogs& catalogs,
                          std::span<const data::ProductRecord> records, const EvalConfig& options,
                          std::size_t max_tokens = 0);

/// Per-attribute value ranking by training count, ties by ascending string,
/// with a global ranking for attributes never seen in training.
class MostCommonModel {
 public:
  static MostCommonModel fit(std::span<const data::ProductRecord> train);
  const std::vector<std::string>& ranking(const std::string& attribute) const;
  const std::string& predict(const std::string& attribute) const { return ranking(attribute).front(); }
  const std::map<std::string, std::vector<std::string>>& per_attribute() const { return per_attribute_; }
  const std::vector<std::string>& global() const { return global_; }

  void save(const std::filesystem::path& path) const;
  static MostCommonModel load(const std::filesystem::path& path);
  friend bool operator==(const MostCommonModel&, const MostCommonModel&) = default;

 private:
  std::map<std::string, std::vector<std::string>> per_attribute_;
  std::vector<std::string> global_;
};

EvaluationResult evaluate(const MostCommonModel& model, std::span<const data::ProductRecord> records);

struct Prediction {
  std::string value;
  double score = 0.0;
};

/// Top-n values for one product and attribute, scored by cosine similarity.
/// Unknown attributes raise CatalogError naming the closest known ones.
std::vector<Prediction> predict_topn(const model::Model& model, const data::Catalogs& catalogs,
                                     const data::ProductRecord& product, const std::string& attribute, std::size_t n,
                                     CandidateMode candidates = CandidateMode::all, std::size_t max_tokens = 0);

/// "value score" lines, score with two decimals.
std::string format_predictions(std::span<const Prediction> predictions);

/// Known strings closest to `query` by edit distance (ties by string).
std::vector<std::string> nearest_strings(const std::string& query, std::span<const std::string> known, std::size_t n = 3);

}  // namespace mae::harness
