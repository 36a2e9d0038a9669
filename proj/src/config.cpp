// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#include "mae/config.hpp"

#include <fstream>

#include "mae/errors.hpp"
#include "mae/util.hpp"

namespace mae {
using json = nlohmann::json;

Profile parse_profile(std::string_view name) {
  if (name == "paper") return Profile::paper;
  if (name == "desk") return Profile::desk;
  throw ConfigError("unknown profile '" + std::string(name) + "' (expected paper or desk)");
}

std::string to_string(Profile profile) { return profile == Profile::paper ? "paper" : "desk"; }

namespace {

std::string candidates_name(CandidateMode m) { return m == CandidateMode::all ? "all" : "attribute"; }

CandidateMode parse_candidates(const std::string& s) {
  if (s == "all") return CandidateMode::all;
  if (s == "attribute") return CandidateMode::attribute;
  throw ConfigError("eval.candidates must be 'all' or 'attribute', got '" + s + "'");
}

template <typename T>
T field(const json& j, const char* section, const char* key) {
  const std::string path = std::string(section) + (section[0] ? "." : "") + key;
  const json& obj = section[0] ? j.at(section) : j;
  if (!obj.contains(key)) throw ConfigError("missing config key " + path);
  try {
    const json& v = obj.at(key);
    if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
      if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError("expected a non-negative integer");
    }
    if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError("expected a number");
    }
    return v.get<T>();
  } catch (const std::exception& e) {
    throw ConfigError("bad value for " + path + ": " + e.what());
  }
}

}  // namespace

RunConfig profile_defaults(Profile profile) {
  RunConfig c;
  c.profile = profile;
  if (profile == Profile::paper) {
    c.embedding_dim = 1024;
    c.text.window = 5;
    c.text.filters = 600;
    c.text.token_dim = 300;
    c.text.dropout = 0.5;
    c.image.feature_dim = 4096;
    c.image.dropout = 0.5;
    c.synth.image_dim = 4096;
  } else {
    // Count thresholds scaled down for corpora of a few hundred to a few
    // thousand products.
    c.preprocess.filter.min_attribute_count = 5;
    c.preprocess.filter.min_value_count = 2;
  }
  return c;
}

json to_json(const RunConfig& c) {
  const auto& s = c.synth;
  return json{
      {"profile", to_string(c.profile)},
      {"seed", c.seed},
      {"model", {{"embedding_dim", c.embedding_dim}}},
      {"fusion", {{"variant", model::to_string(c.variant)}}},
      {"text",
       {{"window", c.text.window},
        {"filters", c.text.filters},
        {"token_dim", c.text.token_dim},
        {"dropout", c.text.dropout},
        {"embeddings", c.text.embeddings},
        {"train_embeddings", c.text.train_embeddings},
        {"max_tokens", c.text.max_tokens}}},
      {"image", {{"feature_dim", c.image.feature_dim}, {"dropout", c.image.dropout}}},
      {"optimizer",
       {{"kind", c.optimizer.kind == OptimizerConfig::Kind::adam ? "adam" : "sgd"},
        {"learning_rate", c.optimizer.learning_rate},
        {"beta1", c.optimizer.beta1},
        {"beta2", c.optimizer.beta2},
        {"epsilon", c.optimizer.epsilon}}},
      {"train",
       {{"batch_size", c.train.batch_size},
        {"epochs", c.train.epochs},
        {"patience", c.train.patience},
        {"negatives", c.train.negatives}}},
      {"eval", {{"candidates", candidates_name(c.eval.candidates)}, {"workers", c.eval.workers}}},
      {"preprocess",
       {{"min_attribute_count", c.preprocess.filter.min_attribute_count},
        {"min_value_count", c.preprocess.filter.min_value_count},
        {"dominance", c.preprocess.filter.dominance},
        {"fixed_point", c.preprocess.filter.fixed_point},
        {"top_attributes", c.preprocess.top_attributes},
        {"split", {c.preprocess.split.train, c.preprocess.split.validation, c.preprocess.split.test}},
        {"rules", c.preprocess.rules}}},
      {"synth",
       {{"n_products", s.n_products},
        {"n_attributes", s.n_attributes},
        {"values_per_attribute", s.values_per_attribute},
        {"attributes_per_product", s.attributes_per_product},
        {"text_signal_rate", s.text_signal_rate},
        {"image_signal_rate", s.image_signal_rate},
        {"disjoint_signals", s.disjoint_signals},
        {"image_dim", s.image_dim},
        {"images_per_product", s.images_per_product},
        {"vocab_noise", s.vocab_noise},
        {"description_length", s.description_length},
        {"value_skew", s.value_skew},
        {"centroid_scale", s.centroid_scale}}},
  };
}

RunConfig config_from_json(const json& j) {
  // Validate the key set against a full default document first.
  json skeleton = to_json(RunConfig{});
  merge_config(skeleton, j);

  RunConfig c;
  c.profile = parse_profile(field<std::string>(j, "", "profile"));
  c.seed = field<std::uint64_t>(j, "", "seed");
  c.embedding_dim = field<std::size_t>(j, "model", "embedding_dim");
  c.variant = model::parse_fusion_variant(field<std::string>(j, "fusion", "variant"));

  c.text.window = field<std::size_t>(j, "text", "window");
  c.text.filters = field<std::size_t>(j, "text", "filters");
  c.text.token_dim = field<std::size_t>(j, "text", "token_dim");
  c.text.dropout = field<double>(j, "text", "dropout");
  c.text.embeddings = field<std::string>(j, "text", "embeddings");
  c.text.train_embeddings = field<bool>(j, "text", "train_embeddings");
  c.text.max_tokens = field<std::size_t>(j, "text", "max_tokens");

  c.image.feature_dim = field<std::size_t>(j, "image", "feature_dim");
  c.image.dropout = field<double>(j, "image", "dropout");

  const auto kind = field<std::string>(j, "optimizer", "kind");
  if (kind != "adam" && kind != "sgd") throw ConfigError("optimizer.kind must be 'adam' or 'sgd', got '" + kind + "'");
  c.optimizer.kind = kind == "adam" ? OptimizerConfig::Kind::adam : OptimizerConfig::Kind::sgd;
  c.optimizer.learning_rate = field<double>(j, "optimizer", "learning_rate");
  c.optimizer.beta1 = field<double>(j, "optimizer", "beta1");
  c.optimizer.beta2 = field<double>(j, "optimizer", "beta2");
  c.optimizer.epsilon = field<double>(j, "optimizer", "epsilon");

  c.train.batch_size = field<std::size_t>(j, "train", "batch_size");
  c.train.epochs = field<std::size_t>(j, "train", "epochs");
  c.train.patience = field<std::size_t>(j, "train", "patience");
  c.train.negatives = field<std::size_t>(j, "train", "negatives");

  c.eval.candidates = parse_candidates(field<std::string>(j, "eval", "candidates"));
  c.eval.workers = field<std::size_t>(j, "eval", "workers");

  auto& p = c.preprocess;
  p.filter.min_attribute_count = field<std::size_t>(j, "preprocess", "min_attribute_count");
  p.filter.min_value_count = field<std::size_t>(j, "preprocess", "min_value_count");
  p.filter.dominance = field<double>(j, "preprocess", "dominance");
  p.filter.fixed_point = field<bool>(j, "preprocess", "fixed_point");
  p.top_attributes = field<std::size_t>(j, "preprocess", "top_attributes");
  const auto split = field<std::vector<double>>(j, "preprocess", "split");
  if (split.size() != 3) throw ConfigError("preprocess.split needs three ratios");
  p.split = {split[0], split[1], split[2]};
  p.rules = field<std::string>(j, "preprocess", "rules");

  auto& s = c.synth;
  s.n_products = field<std::size_t>(j, "synth", "n_products");
  s.n_attributes = field<std::size_t>(j, "synth", "n_attributes");
  s.values_per_attribute = field<std::size_t>(j, "synth", "values_per_attribute");
  s.attributes_per_product = field<std::size_t>(j, "synth", "attributes_per_product");
  s.text_signal_rate = field<double>(j, "synth", "text_signal_rate");
  s.image_signal_rate = field<double>(j, "synth", "image_signal_rate");
  s.disjoint_signals = field<bool>(j, "synth", "disjoint_signals");
  s.image_dim = field<std::size_t>(j, "synth", "image_dim");
  s.images_per_product = field<std::size_t>(j, "synth", "images_per_product");
  s.vocab_noise = field<std::size_t>(j, "synth", "vocab_noise");
  s.description_length = field<std::size_t>(j, "synth", "description_length");
  s.value_skew = field<double>(j, "synth", "value_skew");
  s.centroid_scale = field<double>(j, "synth", "centroid_scale");

  if (c.embedding_dim == 0) throw ConfigError("model.embedding_dim must be at least 1");
  if (c.text.window == 0 || c.text.filters == 0 || c.text.token_dim == 0) {
    throw ConfigError("text.window, text.filters and text.token_dim must be positive");
  }
  for (double rate : {c.text.dropout, c.image.dropout}) {
    if (!(rate >= 0.0 && rate < 1.0)) throw ConfigError("dropout rates must lie in [0, 1)");
  }
  if (c.train.batch_size == 0) throw ConfigError("train.batch_size must be positive");
  if (c.train.negatives == 0) throw ConfigError("train.negatives must be positive");
  if (!(c.optimizer.learning_rate > 0.0)) throw ConfigError("optimizer.learning_rate must be positive");
  if (c.eval.workers == 0) throw ConfigError("eval.workers must be positive");
  return c;
}

void merge_config(json& base, const json& patch, const std::string& prefix) {
  if (!patch.is_object()) throw ConfigError("config " + (prefix.empty() ? std::string("root") : prefix) + " must be an object");
  for (const auto& [key, value] : patch.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (!base.contains(key)) throw ConfigError("unknown config key " + path);
    if (base[key].is_object()) {
      merge_config(base[key], value, path);
    } else {
      if (value.is_object()) throw ConfigError("config key " + path + " is not a section");
      base[key] = value;
    }
  }
}

void apply_override(json& base, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override '" + std::string(assignment) + "' must look like key=value");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json patch = value;
  std::string::size_type end = key.size();
  for (;;) {
    const auto dot = key.rfind('.', end - 1);
    const std::string part = key.substr(dot == std::string::npos ? 0 : dot + 1, end - (dot == std::string::npos ? 0 : dot + 1));
    if (part.empty()) throw ConfigError("bad override key '" + key + "'");
    patch = json{{part, patch}};
    if (dot == std::string::npos) break;
    end = dot;
  }
  merge_config(base, patch);
}

RunConfig resolve_config(const ConfigSources& sources) {
  json file = json::object();
  if (!sources.file.empty()) {
    std::ifstream in(sources.file);
    if (!in) throw ConfigError("cannot read config file " + sources.file.string());
    file = json::parse(in, nullptr, false);
    if (file.is_discarded() || !file.is_object()) {
      throw ConfigError("config file " + sources.file.string() + " is not a JSON object");
    }
  }
  std::string profile_name = sources.profile;
  if (profile_name.empty()) profile_name = file.contains("profile") ? file["profile"].get<std::string>() : "desk";
  json merged = to_json(profile_defaults(parse_profile(profile_name)));
  merge_config(merged, file);
  merged["profile"] = profile_name;
  for (const auto& o : sources.overrides) apply_override(merged, o);
  if (sources.seed) merged["seed"] = *sources.seed;
  return config_from_json(merged);
}

std::string config_hash(const RunConfig& config) { return hex64(fnv1a64(to_json(config).dump())); }

}  // namespace mae
