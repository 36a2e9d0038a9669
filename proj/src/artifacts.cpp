// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#include "mae/artifacts.hpp"

#include "mae/checkpoint.hpp"
#include "mae/errors.hpp"
#include "mae/util.hpp"

namespace mae {
namespace fs = std::filesystem;
using json = nlohmann::json;

PreparedData load_prepared(const Workspace& ws) {
  for (const fs::path& p : {ws.corpus(), ws.catalogs() / "values.tsv", ws.splits() / "train.txt"}) {
    if (!fs::exists(p)) throw MissingArtifactError(p.string(), "preprocess");
  }
  PreparedData d;
  d.corpus = data::read_corpus(ws.corpus());
  d.catalogs = data::import_catalogs(ws.catalogs());
  d.split = data::read_split(ws.splits());
  d.parts = data::apply_split(d.corpus.records, d.split);
  d.corpus_hash = hex64(hash_file(ws.corpus()));
  return d;
}

json run_manifest(const std::string& command, const RunConfig& config, const std::string& corpus_hash) {
  return {{"command", command},
          {"config_hash", config_hash(config)},
          {"seed", config.seed},
          {"corpus_hash", corpus_hash},
          {"config", to_json(config)}};
}

void write_json(const fs::path& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

json read_json(const fs::path& path) {
  const json j = json::parse(read_text_file(path), nullptr, false);
  if (j.is_discarded()) throw FormatError(path.string(), 0, "not valid JSON");
  return j;
}

json to_json(const model::ModelSpec& s) {
  return {{"attributes", s.attributes},
          {"values", s.values},
          {"tokens", s.tokens},
          {"embedding_dim", s.embedding_dim},
          {"token_dim", s.token_dim},
          {"window", s.window},
          {"filters", s.filters},
          {"image_dim", s.image_dim},
          {"text_dropout", s.text_dropout},
          {"image_dropout", s.image_dropout},
          {"variant", model::to_string(s.variant)},
          {"train_token_embeddings", s.train_token_embeddings}};
}

model::ModelSpec model_spec_from_json(const json& j) {
  try {
    model::ModelSpec s;
    s.attributes = j.at("attributes").get<std::size_t>();
    s.values = j.at("values").get<std::size_t>();
    s.tokens = j.at("tokens").get<std::size_t>();
    s.embedding_dim = j.at("embedding_dim").get<std::size_t>();
    s.token_dim = j.at("token_dim").get<std::size_t>();
    s.window = j.at("window").get<std::size_t>();
    s.filters = j.at("filters").get<std::size_t>();
    s.image_dim = j.at("image_dim").get<std::size_t>();
    s.text_dropout = j.at("text_dropout").get<double>();
    s.image_dropout = j.at("image_dropout").get<double>();
    s.variant = model::parse_fusion_variant(j.at("variant").get<std::string>());
    s.train_token_embeddings = j.at("train_token_embeddings").get<bool>();
    return s;
  } catch (const json::exception& e) {
    throw CheckpointError(std::string("bad model description: ") + e.what());
  }
}

void save_model(const fs::path& dir, const model::Model& m, const RunConfig& config) {
  save_checkpoint(m.parameters(), dir);
  write_json(dir / kModelFile, {{"spec", to_json(m.spec())}, {"config", to_json(config)}});
}

LoadedModel load_model(const fs::path& dir) {
  if (!fs::exists(dir / kModelFile) || !fs::exists(dir / kManifestFile)) {
    throw MissingArtifactError((dir / kModelFile).string(), "train");
  }
  const json j = read_json(dir / kModelFile);
  auto spec = model_spec_from_json(j.at("spec"));
  return {model::Model(spec, load_checkpoint(dir)), config_from_json(j.at("config"))};
}

}  // namespace mae
