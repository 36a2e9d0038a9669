// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mae/ops.hpp"

namespace mae::model {

/// Row of the attribute table; CatalogError when the index is out of range.
Var embed_attribute(Var table, std::size_t attribute);
/// Row of the value table; CatalogError when the index is out of range.
Var embed_value(Var table, std::size_t value);

/// Bound parameters of the convolutional text encoder.
struct TextEncoder {
  Var token_table;      // V_tok × d
  Var filters;          // (window·d) × F
  Var filter_bias;      // F
  Var projection;       // F × k
  Var projection_bias;  // k
  std::size_t window = 5;
  double dropout = 0.0;
};

/// Token ids → embeddings → valid convolution → ReLU → max over time →
/// dropout → projection to k. Sequences shorter than the window are
/// right-padded with the padding token, so an empty description encodes the
/// all-padding window.
Var encode_text(std::span<const std::size_t> tokens, const TextEncoder& enc, Mode mode, Rng& rng);

/// Bound parameters of the image encoder.
struct ImageEncoder {
  Var projection;       // d_img × k
  Var projection_bias;  // k
  Var empty;            // k, used when a product has no images
  double dropout = 0.0;
};

/// Per-image affine + ReLU to k, max-pooled over images, then dropout.
/// `features` is m×d_img; an empty tensor means no images.
Var encode_images(const Tensor& features, const ImageEncoder& enc, Mode mode, Rng& rng);

/// Stacks image feature vectors into an m×dim matrix (an empty tensor when
/// there are none). CorpusError on a dimension mismatch.
Tensor stack_features(std::span<const std::vector<double>> images, std::size_t dim);

/// Column-wise maximum over a list of equally long vectors. EmptyPoolError
/// when the list is empty.
Var max_pool(std::span<const Var> rows);

}  // namespace mae::model
