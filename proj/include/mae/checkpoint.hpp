// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#pragma once

#include <filesystem>

#include "mae/parameter_store.hpp"

namespace mae {

// On-disk layout of a checkpoint directory:
//
//   manifest.txt   text, one "key value" header line each:
//                    mae-checkpoint 1
//                    payload params.bin
//                    byte-order little-endian
//                    dtype float64
//                    count <N>
//                  then N parameter lines of tab-separated key=value fields:
//                    name=<id>  shape=<d0>x<d1>...  offset=<byte offset>  trainable=<0|1>
//   params.bin     the values of every parameter, concatenated in manifest
//                  order, each an IEEE-754 binary64 in little-endian byte order.
//
// Only parameter values are stored; gradients and optimizer moments are not.

inline constexpr const char* kManifestFile = "manifest.txt";
inline constexpr const char* kPayloadFile = "params.bin";

void save_checkpoint(const ParameterStore& store, const std::filesystem::path& dir);

/// Reads a checkpoint into a fresh store.
ParameterStore load_checkpoint(const std::filesystem::path& dir);

/// Overwrites the values of `store` from a checkpoint. Names and shapes must
/// match exactly, otherwise CheckpointError.
void restore_checkpoint(ParameterStore& store, const std::filesystem::path& dir);

}  // namespace mae
