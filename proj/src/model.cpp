// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#include "mae/model.hpp"

#include <algorithm>
#include <cmath>

#include "mae/errors.hpp"
#include "mae/tokenizer.hpp"

namespace mae::model {

EncodedRecord encode_record(const data::ProductRecord& record, const data::Catalogs& catalogs, std::size_t image_dim,
                            std::size_t max_tokens) {
  EncodedRecord out;
  auto toks = data::tokenize(record.description);
  if (max_tokens > 0 && toks.size() > max_tokens) toks.resize(max_tokens);
  out.tokens = catalogs.token_ids(toks);
  out.images = stack_features(record.images, image_dim);
  return out;
}

std::vector<std::pair<std::string, Shape>> Model::layout(const ModelSpec& s) {
  const std::size_t k = s.embedding_dim;
  std::vector<std::pair<std::string, Shape>> l = {
      {"attribute_embeddings", {s.attributes, k}},
      {"value_embeddings", {s.values, k}},
  };
  if (s.uses_text()) {
    l.push_back({"text.token_embeddings", {s.tokens, s.token_dim}});
    l.push_back({"text.conv.filters", {s.window * s.token_dim, s.filters}});
    l.push_back({"text.conv.bias", {s.filters}});
    l.push_back({"text.projection.weights", {s.filters, k}});
    l.push_back({"text.projection.bias", {k}});
  }
  if (s.uses_images()) {
    l.push_back({"image.projection.weights", {s.image_dim, k}});
    l.push_back({"image.projection.bias", {k}});
    l.push_back({"image.empty", {k}});
  }
  switch (s.variant) {
    case FusionVariant::concat:
      l.push_back({"fusion.concat.weights", {3 * k, k}});
      l.push_back({"fusion.concat.bias", {k}});
      break;
    case FusionVariant::gmu:
      l.push_back({"fusion.text.weights", {2 * k, k}});
      l.push_back({"fusion.text.bias", {k}});
      l.push_back({"fusion.image.weights", {2 * k, k}});
      l.push_back({"fusion.image.bias", {k}});
      l.push_back({"fusion.gate.weights", {2 * k, k}});
      l.push_back({"fusion.gate.bias", {k}});
      break;
    case FusionVariant::text:
    case FusionVariant::image:
      l.push_back({"fusion.unimodal.weights", {2 * k, k}});
      l.push_back({"fusion.unimodal.bias", {k}});
      break;
  }
  return l;
}

Model Model::initialize(const ModelSpec& spec, std::uint64_t seed, const Tensor* pretrained_tokens) {
  if (spec.attributes == 0 || spec.values == 0 || spec.embedding_dim == 0 || spec.window == 0 || spec.filters == 0 ||
      spec.token_dim == 0 || spec.image_dim == 0 || (spec.uses_text() && spec.tokens < 2)) {
    throw ConfigError("model sizes must be positive");
  }
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto gaussian = [&](const Shape& shape, double stddev) {
    Tensor t(shape);
    for (double& v : t.data()) v = stddev * gauss(rng);
    return t;
  };

  ParameterStore store;
  const double embed_std = 1.0 / std::sqrt(static_cast<double>(spec.embedding_dim));
  for (const auto& [name, shape] : layout(spec)) {
    const bool is_bias = name.ends_with(".bias");
    if (name == "text.token_embeddings") {
      if (pretrained_tokens != nullptr) {
        if (pretrained_tokens->shape() != shape) {
          throw ConfigError("pretrained token table " + pretrained_tokens->shape_string() + " does not match " +
                            shape_string(shape));
        }
        store.add(name, *pretrained_tokens, spec.train_token_embeddings);
      } else {
        Tensor t = gaussian(shape, 1.0 / std::sqrt(static_cast<double>(spec.token_dim)));
        for (auto r : {data::kUnknownToken, data::kPaddingToken}) std::ranges::fill(t.row(r), 0.0);
        store.add(name, std::move(t), spec.train_token_embeddings);
      }
    } else if (is_bias) {
      store.add(name, Tensor(shape));
    } else if (name.ends_with("embeddings") || name == "image.empty") {
      store.add(name, gaussian(shape, embed_std));
    } else {
      store.add(name, gaussian(shape, 1.0 / std::sqrt(static_cast<double>(shape.front()))));
    }
  }
  return Model(spec, std::move(store));
}

Model::Model(ModelSpec spec, ParameterStore parameters) : spec_(spec), params_(std::move(parameters)) {
  const auto expected = layout(spec_);
  if (expected.size() != params_.size()) {
    throw CheckpointError("model expects " + std::to_string(expected.size()) + " parameters, got " +
                          std::to_string(params_.size()));
  }
  for (const auto& [name, shape] : expected) {
    if (!params_.contains(name)) throw CheckpointError("missing parameter '" + name + "'");
    if (params_.value(name).shape() != shape) {
      throw CheckpointError("parameter '" + name + "' has shape " + params_.value(name).shape_string() + ", expected " +
                            shape_string(shape));
    }
  }
  if (spec_.uses_text()) params_.get("text.token_embeddings").trainable = spec_.train_token_embeddings;
}

namespace {

template <typename Binder>
Model::Bound bind_with(const ModelSpec& s, Binder bind) {
  Model::Bound b;
  b.attributes = bind("attribute_embeddings");
  b.values = bind("value_embeddings");
  if (s.uses_text()) {
    b.text = {bind("text.token_embeddings"), bind("text.conv.filters"), bind("text.conv.bias"),
              bind("text.projection.weights"), bind("text.projection.bias"), s.window, s.text_dropout};
  }
  if (s.uses_images()) {
    b.image = {bind("image.projection.weights"), bind("image.projection.bias"), bind("image.empty"), s.image_dropout};
  }
  switch (s.variant) {
    case FusionVariant::concat:
      b.concat = {bind("fusion.concat.weights"), bind("fusion.concat.bias")};
      break;
    case FusionVariant::gmu:
      b.text_fusion = {bind("fusion.text.weights"), bind("fusion.text.bias")};
      b.image_fusion = {bind("fusion.image.weights"), bind("fusion.image.bias")};
      b.gate = {bind("fusion.gate.weights"), bind("fusion.gate.bias")};
      break;
    case FusionVariant::text:
    case FusionVariant::image:
      b.unimodal = {bind("fusion.unimodal.weights"), bind("fusion.unimodal.bias")};
      break;
  }
  return b;
}

}  // namespace

Model::Bound Model::bind(Tape& tape) {
  return bind_with(spec_, [&](const char* name) { return tape.parameter(params_, name); });
}

Model::Bound Model::bind(Tape& tape) const {
  return bind_with(spec_, [&](const char* name) { return tape.constant_ref(params_.value(name)); });
}

Model::Evidence Model::encode(const Bound& bound, const EncodedRecord& record, Mode mode, Rng& rng) const {
  Evidence e;
  if (spec_.uses_text()) e.text = encode_text(record.tokens, bound.text, mode, rng);
  if (spec_.uses_images()) e.image = encode_images(record.images, bound.image, mode, rng);
  return e;
}

Var Model::context(const Bound& bound, std::size_t attribute, const Evidence& evidence) const {
  Var a = embed_attribute(bound.attributes, attribute);
  switch (spec_.variant) {
    case FusionVariant::concat: return fuse_concat(a, evidence.text, evidence.image, bound.concat);
    case FusionVariant::gmu:
      return fuse_gmu(a, evidence.text, evidence.image, bound.text_fusion, bound.image_fusion, bound.gate).fused;
    case FusionVariant::text: return fuse_unimodal(a, evidence.text, bound.unimodal);
    case FusionVariant::image: return fuse_unimodal(a, evidence.image, bound.unimodal);
  }
  throw ContractError("unhandled fusion variant");
}

std::vector<Tensor> Model::contexts(const EncodedRecord& record, std::span<const std::size_t> attributes) const {
  Tape tape;
  Rng unused(0);
  const Bound b = bind(tape);
  const Evidence e = encode(b, record, Mode::eval, unused);
  std::vector<Tensor> out;
  out.reserve(attributes.size());
  for (auto a : attributes) out.push_back(context(b, a, e).value());
  return out;
}

}  // namespace mae::model
