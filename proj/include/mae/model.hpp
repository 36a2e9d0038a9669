// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "mae/catalogs.hpp"
#include "mae/corpus.hpp"
#include "mae/encoders.hpp"
#include "mae/fusion.hpp"
#include "mae/parameter_store.hpp"

namespace mae::model {

/// Sizes and switches that fix the parameter layout.
struct ModelSpec {
  std::size_t attributes = 0;
  std::size_t values = 0;
  std::size_t tokens = 0;
  std::size_t embedding_dim = 64;
  std::size_t token_dim = 32;
  std::size_t window = 3;
  std::size_t filters = 64;
  std::size_t image_dim = 64;
  double text_dropout = 0.0;
  double image_dropout = 0.0;
  FusionVariant variant = FusionVariant::concat;
  bool train_token_embeddings = false;

  bool uses_text() const { return variant != FusionVariant::image; }
  bool uses_images() const { return variant != FusionVariant::text; }
};

/// A product's evidence in model-ready form.
struct EncodedRecord {
  std::vector<std::size_t> tokens;
  Tensor images;  // m × d_img, empty when the product has no images
};

/// Tokenizes and maps a record onto catalog indices. A positive max_tokens
/// truncates long descriptions.
EncodedRecord encode_record(const data::ProductRecord& record, const data::Catalogs& catalogs, std::size_t image_dim,
                            std::size_t max_tokens = 0);

/// Attribute, text and image encoders plus one fusion variant. Only the
/// parameters the variant reads are allocated.
class Model {
 public:
  /// Random initialization. Embedding tables are Gaussian with std 1/√k, layer
  /// weights Gaussian with std 1/√fan_in, biases zero. A pretrained token
  /// table replaces the random one when given.
  static Model initialize(const ModelSpec& spec, std::uint64_t seed, const Tensor* pretrained_tokens = nullptr);

  /// Wraps existing parameters; CheckpointError when the layout disagrees with spec.
  Model(ModelSpec spec, ParameterStore parameters);

  const ModelSpec& spec() const noexcept { return spec_; }
  ParameterStore& parameters() noexcept { return params_; }
  const ParameterStore& parameters() const noexcept { return params_; }
  const Tensor& value_table() const { return params_.value("value_embeddings"); }

  /// Parameters bound to one tape.
  struct Bound {
    Var attributes;
    Var values;
    TextEncoder text;
    ImageEncoder image;
    Dense concat, text_fusion, image_fusion, gate, unimodal;
  };

  /// Binds for training: trainable parameters receive gradients.
  Bound bind(Tape& tape);
  /// Binds read-only; safe to call concurrently from several evaluation workers.
  Bound bind(Tape& tape) const;

  struct Evidence {
    Var text;
    Var image;
  };

  Evidence encode(const Bound& bound, const EncodedRecord& record, Mode mode, Rng& rng) const;
  /// Fused context embedding c for one attribute query.
  Var context(const Bound& bound, std::size_t attribute, const Evidence& evidence) const;

  /// Eval-mode context embedding for every attribute in `attributes`.
  std::vector<Tensor> contexts(const EncodedRecord& record, std::span<const std::size_t> attributes) const;

 private:
  static std::vector<std::pair<std::string, Shape>> layout(const ModelSpec& spec);

  ModelSpec spec_;
  ParameterStore params_;
};

}  // namespace mae::model
