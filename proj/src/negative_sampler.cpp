// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#include "mae/negative_sampler.hpp"

#include <algorithm>

#include "mae/errors.hpp"

namespace mae::data {

NegativeSampler::NegativeSampler(const Vocabulary& values) {
  std::size_t nonzero = 0;
  std::uint64_t running = 0;
  cumulative_.reserve(values.size());
  for (auto c : values.counts()) {
    running += c;
    cumulative_.push_back(running);
    if (c > 0) ++nonzero;
  }
  if (nonzero < 2) throw DegenerateCatalogError("negative sampling needs at least two distinct values");
}

std::size_t NegativeSampler::sample(std::size_t positive, std::mt19937_64& rng) const {
  std::uniform_int_distribution<std::uint64_t> draw(0, cumulative_.back() - 1);
  while (true) {
    const auto ticket = draw(rng);
    const auto idx = static_cast<std::size_t>(
        std::upper_bound(cumulative_.begin(), cumulative_.end(), ticket) - cumulative_.begin());
    if (idx != positive) return idx;
  }
}

std::size_t sample_negative(const Catalogs& catalogs, std::size_t positive, std::mt19937_64& rng) {
  return NegativeSampler(catalogs.values).sample(positive, rng);
}

}  // namespace mae::data
