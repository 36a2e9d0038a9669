// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#include "mae/encoders.hpp"

#include "mae/catalogs.hpp"
#include "mae/errors.hpp"

namespace mae::model {

Var embed_attribute(Var table, std::size_t attribute) { return ops::row(table, attribute); }

Var embed_value(Var table, std::size_t value) { return ops::row(table, value); }

Var encode_text(std::span<const std::size_t> tokens, const TextEncoder& enc, Mode mode, Rng& rng) {
  std::vector<std::size_t> ids(tokens.begin(), tokens.end());
  if (ids.size() < enc.window) ids.resize(enc.window, data::kPaddingToken);
  Var seq = ops::gather_rows(enc.token_table, ids);
  Var features = ops::relu(ops::conv1d_window(seq, enc.filters, enc.filter_bias, enc.window));
  Var pooled = ops::dropout(ops::max_pool_rows(features), enc.dropout, mode, rng);
  return ops::affine(pooled, enc.projection, enc.projection_bias);
}

Var encode_images(const Tensor& features, const ImageEncoder& enc, Mode mode, Rng& rng) {
  if (features.empty()) return enc.empty;
  const std::size_t expected = enc.projection.value().rows();
  if (features.rank() != 2 || features.cols() != expected) {
    throw CorpusError("image features " + features.shape_string() + " do not match encoder input dimension " +
                      std::to_string(expected));
  }
  Tape& tape = *enc.projection.tape();
  Var x = tape.constant_ref(features);
  Var per_image = ops::relu(ops::affine(x, enc.projection, enc.projection_bias));
  return ops::dropout(ops::max_pool_rows(per_image), enc.dropout, mode, rng);
}

Tensor stack_features(std::span<const std::vector<double>> images, std::size_t dim) {
  if (images.empty()) return {};
  std::vector<double> data;
  data.reserve(images.size() * dim);
  for (const auto& img : images) {
    if (img.size() != dim) {
      throw CorpusError("image feature of dimension " + std::to_string(img.size()) + ", expected " + std::to_string(dim));
    }
    data.insert(data.end(), img.begin(), img.end());
  }
  return Tensor({images.size(), dim}, std::move(data));
}

Var max_pool(std::span<const Var> rows) {
  if (rows.empty()) throw EmptyPoolError("max_pool: no rows to pool");
  const std::size_t k = rows.front().size();
  return ops::max_pool_rows(ops::reshape(ops::concat(rows), {rows.size(), k}));
}

}  // namespace mae::model
