// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "mae/catalogs.hpp"
#include "mae/config.hpp"
#include "mae/corpus.hpp"
#include "mae/model.hpp"
#include "mae/preprocess.hpp"

namespace mae {

// Workspace layout written by `mae preprocess` and read by later stages:
//
//   corpus/corpus.jsonl       filtered corpus
//   catalogs/*.tsv            vocabularies built from the training split
//   splits/{train,validation,test,seed}.txt
//   reports/                  summaries and evaluation reports
//   checkpoints/<name>/       trained models and baselines
//   manifests/<command>.json  reproducibility manifests
struct Workspace {
  std::filesystem::path root;

  std::filesystem::path corpus() const { return root / "corpus" / "corpus.jsonl"; }
  std::filesystem::path catalogs() const { return root / "catalogs"; }
  std::filesystem::path splits() const { return root / "splits"; }
  std::filesystem::path reports() const { return root / "reports"; }
  std::filesystem::path checkpoints() const { return root / "checkpoints"; }
  std::filesystem::path manifests() const { return root / "manifests"; }
};

struct PreparedData {
  data::Corpus corpus;
  data::Catalogs catalogs;
  data::SplitSet split;
  data::SplitRecords parts;
  std::string corpus_hash;
};

/// Loads the artifacts of `mae preprocess`; MissingArtifactError when absent.
PreparedData load_prepared(const Workspace& ws);

/// Reproducibility record: no timestamps, so reruns compare byte for byte.
nlohmann::json run_manifest(const std::string& command, const RunConfig& config, const std::string& corpus_hash);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

inline constexpr const char* kModelFile = "model.json";

nlohmann::json to_json(const model::ModelSpec& spec);
model::ModelSpec model_spec_from_json(const nlohmann::json& j);

/// Writes a checkpoint directory: parameters plus model.json describing the layout.
void save_model(const std::filesystem::path& dir, const model::Model& model, const RunConfig& config);

struct LoadedModel {
  model::Model model;
  RunConfig config;
};
/// MissingArtifactError when the directory holds no trained model.
LoadedModel load_model(const std::filesystem::path& dir);

}  // namespace mae
