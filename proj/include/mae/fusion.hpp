// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#pragma once

#include <string>
#include <string_view>

#include "mae/ops.hpp"

namespace mae::model {

enum class FusionVariant { concat, gmu, text, image };

std::string to_string(FusionVariant variant);
/// Accepts "concat", "gmu", "text" and "image"; ConfigError otherwise.
FusionVariant parse_fusion_variant(std::string_view name);

/// A fully connected layer bound to a tape.
struct Dense {
  Var weights;
  Var bias;
};

/// c = W·[c_a; c_D; c_I] + b. Purely affine.
Var fuse_concat(Var attribute, Var text, Var image, const Dense& layer);

/// Intermediate values of the gated fusion, exposed for inspection.
struct GmuOutput {
  Var text_fused;   // c^a_D = affine([c_a; c_D])
  Var image_fused;  // c^a_I = affine([c_a; c_I])
  Var gate;         // z = σ(W_z·[c^a_D; c^a_I] + b_z)
  Var fused;        // z⊙c^a_D + (1−z)⊙c^a_I
};

GmuOutput fuse_gmu(Var attribute, Var text, Var image, const Dense& text_layer, const Dense& image_layer,
                   const Dense& gate_layer);

/// c = W·[c_a; c_mode] + b, the single-modality stand-in for fusion.
Var fuse_unimodal(Var attribute, Var modality, const Dense& layer);

}  // namespace mae::model
