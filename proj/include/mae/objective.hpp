// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "mae/ops.hpp"

namespace mae::model {

/// L = (1 − g(c, c⁺))² + [g(c, c⁻) ≥ 0]·g(c, c⁻)², with g the cosine
/// similarity. At g(c, c⁻) = 0 the gradient of the zero branch is used.
Var contrastive_loss(Var context, Var positive, Var negative);

struct ScoredValue {
  std::size_t value = 0;
  double score = 0.0;

  friend bool operator==(const ScoredValue&, const ScoredValue&) = default;
};

/// Candidates by descending cosine score; ties by ascending value index.
struct RankedPrediction {
  std::vector<ScoredValue> entries;

  std::size_t size() const noexcept { return entries.size(); }
  /// 0-based position of a value, if ranked.
  std::optional<std::size_t> rank_of(std::size_t value) const;
  RankedPrediction top(std::size_t n) const;
};

/// Scores every candidate row of `values` against the context by cosine
/// similarity and returns the full ranking.
RankedPrediction decode_value(std::span<const double> context, const Tensor& values,
                              std::span<const std::size_t> candidates);

inline constexpr std::array<std::size_t, 4> kReportKs{1, 5, 10, 20};

using HitsAtK = std::map<std::size_t, double>;

/// Fraction of examples whose gold value sits within the top k.
HitsAtK hits_at_k(std::span<const RankedPrediction> predictions, std::span<const std::size_t> gold,
                  std::span<const std::size_t> ks = kReportKs);

/// hits@k from 0-based gold ranks (nullopt = gold not ranked at all).
HitsAtK hits_from_ranks(std::span<const std::optional<std::size_t>> ranks, std::span<const std::size_t> ks = kReportKs);

}  // namespace mae::model
