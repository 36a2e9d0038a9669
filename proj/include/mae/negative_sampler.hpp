// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "mae/catalogs.hpp"

namespace mae::data {

/// Draws values in proportion to their training counts, redrawing whenever
/// the draw equals the positive value.
class NegativeSampler {
 public:
  explicit NegativeSampler(const Vocabulary& values);

  /// `positive` may lie outside the catalog, in which case nothing is rejected.
  std::size_t sample(std::size_t positive, std::mt19937_64& rng) const;

 private:
  std::vector<std::uint64_t> cumulative_;
};

std::size_t sample_negative(const Catalogs& catalogs, std::size_t positive, std::mt19937_64& rng);

}  // namespace mae::data
