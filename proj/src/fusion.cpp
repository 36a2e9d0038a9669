// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#include "mae/fusion.hpp"

#include "mae/errors.hpp"

namespace mae::model {
namespace {

void require_lengths(const char* op, std::initializer_list<Var> inputs) {
  const std::size_t k = inputs.begin()->size();
  for (const Var& v : inputs) {
    if (v.value().rank() != 1 || v.size() != k) {
      throw DimensionError(std::string(op) + ": inputs must be vectors of one length, got " +
                           inputs.begin()->value().shape_string() + " and " + v.value().shape_string());
    }
  }
}

}  // namespace

std::string to_string(FusionVariant variant) {
  switch (variant) {
    case FusionVariant::concat: return "concat";
    case FusionVariant::gmu: return "gmu";
    case FusionVariant::text: return "text";
    case FusionVariant::image: return "image";
  }
  return "?";
}

FusionVariant parse_fusion_variant(std::string_view name) {
  if (name == "concat") return FusionVariant::concat;
  if (name == "gmu") return FusionVariant::gmu;
  if (name == "text") return FusionVariant::text;
  if (name == "image") return FusionVariant::image;
  throw ConfigError("unknown fusion variant '" + std::string(name) + "' (expected concat, gmu, text or image)");
}

Var fuse_concat(Var attribute, Var text, Var image, const Dense& layer) {
  require_lengths("fuse_concat", {attribute, text, image});
  return ops::affine(ops::concat({attribute, text, image}), layer.weights, layer.bias);
}

GmuOutput fuse_gmu(Var attribute, Var text, Var image, const Dense& text_layer, const Dense& image_layer,
                   const Dense& gate_layer) {
  require_lengths("fuse_gmu", {attribute, text, image});
  GmuOutput out;
  out.text_fused = ops::affine(ops::concat({attribute, text}), text_layer.weights, text_layer.bias);
  out.image_fused = ops::affine(ops::concat({attribute, image}), image_layer.weights, image_layer.bias);
  out.gate = ops::sigmoid(ops::affine(ops::concat({out.text_fused, out.image_fused}), gate_layer.weights, gate_layer.bias));
  out.fused = ops::gate_mix(out.gate, out.text_fused, out.image_fused);
  return out;
}

Var fuse_unimodal(Var attribute, Var modality, const Dense& layer) {
  require_lengths("fuse_unimodal", {attribute, modality});
  return ops::affine(ops::concat({attribute, modality}), layer.weights, layer.bias);
}

}  // namespace mae::model
