// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#include "mae/objective.hpp"

#include <algorithm>

#include "mae/errors.hpp"

namespace mae::model {

Var contrastive_loss(Var context, Var positive, Var negative) {
  Var pull = ops::square(ops::scale_shift(ops::cosine_similarity(context, positive), -1.0, 1.0));
  Var push = ops::square(ops::relu(ops::cosine_similarity(context, negative)));
  return ops::add(pull, push);
}

std::optional<std::size_t> RankedPrediction::rank_of(std::size_t value) const {
  for (std::size_t i = 0; i < entries.size(); ++i)
    if (entries[i].value == value) return i;
  return std::nullopt;
}

RankedPrediction RankedPrediction::top(std::size_t n) const {
  RankedPrediction out;
  out.entries.assign(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(std::min(n, entries.size())));
  return out;
}

RankedPrediction decode_value(std::span<const double> context, const Tensor& values,
                              std::span<const std::size_t> candidates) {
  if (candidates.empty()) throw ContractError("decode_value: empty candidate set");
  if (values.rank() != 2 || values.cols() != context.size()) {
    throw DimensionError("decode_value: context of length " + std::to_string(context.size()) +
                         " against value table " + values.shape_string());
  }
  RankedPrediction out;
  out.entries.reserve(candidates.size());
  for (auto v : candidates) {
    if (v >= values.rows()) throw CatalogError("candidate value " + std::to_string(v) + " out of range");
    out.entries.push_back({v, cosine(context, values.row(v))});
  }
  std::sort(out.entries.begin(), out.entries.end(), [](const ScoredValue& a, const ScoredValue& b) {
    return a.score != b.score ? a.score > b.score : a.value < b.value;
  });
  return out;
}

HitsAtK hits_from_ranks(std::span<const std::optional<std::size_t>> ranks, std::span<const std::size_t> ks) {
  if (ranks.empty()) throw ContractError("hits@k needs at least one example");
  HitsAtK out;
  for (auto k : ks) {
    std::size_t hits = 0;
    for (const auto& r : ranks)
      if (r && *r < k) ++hits;
    out[k] = static_cast<double>(hits) / static_cast<double>(ranks.size());
  }
  return out;
}

HitsAtK hits_at_k(std::span<const RankedPrediction> predictions, std::span<const std::size_t> gold,
                  std::span<const std::size_t> ks) {
  if (predictions.size() != gold.size()) {
    throw ContractError("hits@k: " + std::to_string(predictions.size()) + " predictions for " +
                        std::to_string(gold.size()) + " gold values");
  }
  std::vector<std::optional<std::size_t>> ranks;
  ranks.reserve(gold.size());
  for (std::size_t i = 0; i < gold.size(); ++i) ranks.push_back(predictions[i].rank_of(gold[i]));
  return hits_from_ranks(ranks, ks);
}

}  // namespace mae::model
