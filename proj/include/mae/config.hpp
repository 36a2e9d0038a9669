// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mae/fusion.hpp"
#include "mae/parameter_store.hpp"
#include "mae/preprocess.hpp"
#include "mae/synthetic.hpp"

namespace mae {

enum class Profile { paper, desk };
Profile parse_profile(std::string_view name);
std::string to_string(Profile profile);

enum class CandidateMode { all, attribute };

struct TextConfig {
  std::size_t window = 3;
  std::size_t filters = 64;
  std::size_t token_dim = 32;
  double dropout = 0.1;
  /// Optional "token v1 ... vd" file of pretrained vectors.
  std::string embeddings;
  /// Fine-tune pretrained vectors. Without a file the table is always trained.
  bool train_embeddings = false;
  /// Truncate descriptions to this many tokens; 0 keeps them whole.
  std::size_t max_tokens = 0;
};

struct ImageConfig {
  /// Declared feature dimension; 0 accepts whatever the corpus carries.
  std::size_t feature_dim = 64;
  double dropout = 0.1;
};

struct TrainConfig {
  std::size_t batch_size = 64;
  std::size_t epochs = 15;
  std::size_t patience = 3;
  std::size_t negatives = 1;
};

struct EvalConfig {
  CandidateMode candidates = CandidateMode::all;
  std::size_t workers = 1;
};

struct PreprocessConfig {
  data::FilterThresholds filter;
  std::size_t top_attributes = 100;
  data::SplitRatios split;
  /// Attribute normalization rules file; empty means no rules.
  std::string rules;
};

/// Everything a run needs besides its input artifacts.
struct RunConfig {
  Profile profile = Profile::desk;
  std::uint64_t seed = 1;
  std::size_t embedding_dim = 64;
  model::FusionVariant variant = model::FusionVariant::concat;
  TextConfig text;
  ImageConfig image;
  OptimizerConfig optimizer;
  TrainConfig train;
  EvalConfig eval;
  PreprocessConfig preprocess;
  data::SyntheticConfig synth;
};

RunConfig profile_defaults(Profile profile);

nlohmann::json to_json(const RunConfig& config);
/// Strict: every key must be known and every value well typed.
RunConfig config_from_json(const nlohmann::json& j);

/// Layers a partial JSON object over `base`. Unknown keys raise ConfigError
/// naming the dotted path.
void merge_config(nlohmann::json& base, const nlohmann::json& patch, const std::string& prefix = "");
/// Applies one "dotted.key=value" override. The value is read as JSON when it
/// parses, otherwise as a string.
void apply_override(nlohmann::json& base, std::string_view assignment);

struct ConfigSources {
  std::string profile;  // empty: take it from the file, else desk
  std::filesystem::path file;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
};
/// Profile defaults, then the config file, then --set overrides, then --seed.
RunConfig resolve_config(const ConfigSources& sources);

/// Stable hash of the canonical JSON form.
std::string config_hash(const RunConfig& config);

}  // namespace mae
