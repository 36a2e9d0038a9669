// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#include "mae/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "mae/errors.hpp"

namespace mae::data {

namespace {

std::string two_digits(std::size_t n) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%02zu", n);
  return buf;
}

std::vector<double> zipf_weights(std::size_t n, double skew) {
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = 1.0 / std::pow(static_cast<double>(j + 1), skew);
  return w;
}

}  // namespace

std::string synthetic_attribute_name(std::size_t attribute) { return "attr" + two_digits(attribute); }

std::string synthetic_value_name(std::size_t attribute, std::size_t value) {
  return "a" + two_digits(attribute) + "v" + two_digits(value);
}

void validate_synthetic_config(const SyntheticConfig& c) {
  if (c.values_per_attribute < 2) throw ConfigError("values_per_attribute must be at least 2");
  if (c.n_products == 0 || c.n_attributes == 0 || c.attributes_per_product == 0 || c.image_dim == 0 ||
      c.images_per_product == 0 || c.vocab_noise == 0) {
    throw ConfigError("synthetic corpus sizes must be positive");
  }
  auto rate_ok = [](double r) { return r >= 0.0 && r <= 1.0; };
  if (!rate_ok(c.text_signal_rate) || !rate_ok(c.image_signal_rate)) {
    throw ConfigError("signal rates must lie in [0, 1]");
  }
  if (!(c.value_skew >= 0.0) || !(c.centroid_scale >= 0.0)) throw ConfigError("skew and centroid scale must be >= 0");
}

double most_frequent_value_rate(const SyntheticConfig& c) {
  const auto w = zipf_weights(c.values_per_attribute, c.value_skew);
  return *std::max_element(w.begin(), w.end()) / std::accumulate(w.begin(), w.end(), 0.0);
}

SyntheticCorpus generate_synthetic(const SyntheticConfig& c, std::uint64_t seed) {
  validate_synthetic_config(c);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const std::size_t n_values = c.n_attributes * c.values_per_attribute;
  std::vector<std::vector<double>> centroids(n_values, std::vector<double>(c.image_dim));
  for (auto& centroid : centroids)
    for (double& x : centroid) x = c.centroid_scale * gauss(rng);

  const auto weights = zipf_weights(c.values_per_attribute, c.value_skew);
  std::discrete_distribution<std::size_t> value_dist(weights.begin(), weights.end());
  std::uniform_int_distribution<std::size_t> noise_word(0, c.vocab_noise - 1);
  const std::size_t per_product = std::min(c.attributes_per_product, c.n_attributes);

  std::vector<std::size_t> attribute_order(c.n_attributes);
  std::iota(attribute_order.begin(), attribute_order.end(), 0);

  SyntheticCorpus out;
  out.corpus.image_dim = c.image_dim;
  out.corpus.records.reserve(c.n_products);
  out.evidence.reserve(c.n_products);
  for (std::size_t p = 0; p < c.n_products; ++p) {
    ProductRecord r;
    r.id = "p" + std::to_string(p);

    // Partial Fisher-Yates: the first per_product slots are a uniform subset.
    for (std::size_t i = 0; i < per_product; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, c.n_attributes - 1);
      std::swap(attribute_order[i], attribute_order[pick(rng)]);
    }
    std::vector<std::size_t> attrs(attribute_order.begin(), attribute_order.begin() + static_cast<std::ptrdiff_t>(per_product));
    std::sort(attrs.begin(), attrs.end());

    std::vector<std::string> words;
    words.reserve(c.description_length + per_product);
    for (std::size_t i = 0; i < c.description_length; ++i) words.push_back("w" + std::to_string(noise_word(rng)));

    std::vector<PlantedEvidence> planted;
    std::vector<std::size_t> image_values;
    for (auto a : attrs) {
      const std::size_t v = value_dist(rng);
      r.pairs.push_back({synthetic_attribute_name(a), synthetic_value_name(a, v)});
      PlantedEvidence e;
      if (c.disjoint_signals) {
        const double u = unit(rng);
        e.text = u < c.text_signal_rate;
        e.image = u >= 1.0 - c.image_signal_rate;
      } else {
        e.text = unit(rng) < c.text_signal_rate;
        e.image = unit(rng) < c.image_signal_rate;
      }
      if (e.text) {
        std::uniform_int_distribution<std::size_t> slot(0, words.size());
        words.insert(words.begin() + static_cast<std::ptrdiff_t>(slot(rng)), synthetic_value_name(a, v));
      }
      if (e.image) image_values.push_back(a * c.values_per_attribute + v);
      planted.push_back(e);
    }

    for (std::size_t i = 0; i < words.size(); ++i) {
      if (i > 0) r.description += ' ';
      r.description += words[i];
    }
    r.description += " .";

    // Each image superposes the centroids of its image-visible values over unit noise.
    for (std::size_t i = 0; i < c.images_per_product; ++i) {
      std::vector<double> feat(c.image_dim);
      for (double& x : feat) x = gauss(rng);
      for (auto v : image_values)
        for (std::size_t d = 0; d < c.image_dim; ++d) feat[d] += centroids[v][d];
      r.images.push_back(std::move(feat));
    }
    out.corpus.records.push_back(std::move(r));
    out.evidence.push_back(std::move(planted));
  }
  return out;
}

}  // namespace mae::data
