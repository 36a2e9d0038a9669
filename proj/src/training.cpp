// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#include "mae/training.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mae/errors.hpp"
#include "mae/evaluation.hpp"
#include "mae/negative_sampler.hpp"
#include "mae/objective.hpp"
#include "mae/ops.hpp"
#include "mae/util.hpp"

namespace mae::harness {

model::ModelSpec model_spec(const RunConfig& config, const data::Catalogs& catalogs, std::size_t corpus_image_dim) {
  if (config.image.feature_dim != 0 && corpus_image_dim != 0 && config.image.feature_dim != corpus_image_dim) {
    throw ConfigError("image.feature_dim is " + std::to_string(config.image.feature_dim) +
                      " but the corpus carries " + std::to_string(corpus_image_dim) + "-d image features");
  }
  model::ModelSpec s;
  s.attributes = catalogs.attributes.size();
  s.values = catalogs.values.size();
  s.tokens = catalogs.tokens.size();
  s.embedding_dim = config.embedding_dim;
  s.token_dim = config.text.token_dim;
  s.window = config.text.window;
  s.filters = config.text.filters;
  s.image_dim = corpus_image_dim != 0 ? corpus_image_dim : std::max<std::size_t>(config.image.feature_dim, 1);
  s.text_dropout = config.text.dropout;
  s.image_dropout = config.image.dropout;
  s.variant = config.variant;
  // Without pretrained vectors the table starts random and must be learned.
  s.train_token_embeddings = config.text.embeddings.empty() || config.text.train_embeddings;
  return s;
}

namespace {

struct Example {
  std::size_t record;
  std::size_t attribute;
  std::size_t value;
};

// Mean loss over one group of examples; negatives drawn from `negatives`.
Var batch_loss(model::Model& m, Tape& tape, std::span<const Example> batch, std::span<const model::EncodedRecord> encoded,
               const data::NegativeSampler& sampler, std::size_t n_negatives, Mode mode, Rng& dropout,
               std::mt19937_64& negatives) {
  const auto bound = m.bind(tape);
  std::vector<Var> losses;
  losses.reserve(batch.size());
  for (const auto& ex : batch) {
    const auto evidence = m.encode(bound, encoded[ex.record], mode, dropout);
    Var c = m.context(bound, ex.attribute, evidence);
    Var positive = ops::row(bound.values, ex.value);
    std::vector<Var> per_negative;
    for (std::size_t j = 0; j < n_negatives; ++j) {
      per_negative.push_back(model::contrastive_loss(c, positive, ops::row(bound.values, sampler.sample(ex.value, negatives))));
    }
    losses.push_back(n_negatives == 1 ? per_negative.front() : ops::mean(per_negative));
  }
  return ops::mean(losses);
}

}  // namespace

TrainResult train(const RunConfig& config, const data::Catalogs& catalogs, std::span<const data::ProductRecord> train_split,
                  std::span<const data::ProductRecord> validation, std::size_t image_dim, const Tensor* pretrained_tokens,
                  const EpochCallback& on_epoch) {
  if (train_split.empty()) throw InsufficientDataError("training split is empty");
  if (catalogs.attributes.size() == 0 || catalogs.values.size() == 0) {
    throw InsufficientDataError("no attribute-value pairs survived preprocessing; lower the filter thresholds");
  }
  const auto spec = model_spec(config, catalogs, image_dim);
  TrainResult result{model::Model::initialize(spec, derive_seed(config.seed, "init"), pretrained_tokens), {}, 0, 0};
  model::Model& m = result.model;

  std::vector<model::EncodedRecord> encoded;
  encoded.reserve(train_split.size());
  std::vector<Example> examples;
  for (std::size_t i = 0; i < train_split.size(); ++i) {
    encoded.push_back(model::encode_record(train_split[i], catalogs, spec.image_dim, config.text.max_tokens));
    for (const auto& p : train_split[i].pairs) {
      examples.push_back({i, catalogs.attributes.index(p.attribute), catalogs.values.index(p.value)});
    }
  }
  if (examples.empty()) throw InsufficientDataError("training split has no attribute-value pairs");

  const data::NegativeSampler sampler(catalogs.values);
  std::mt19937_64 shuffle_rng(derive_seed(config.seed, "shuffle"));
  std::mt19937_64 negative_rng(derive_seed(config.seed, "negatives"));
  Rng dropout_rng(derive_seed(config.seed, "dropout"));

  auto validate = [&]() -> std::optional<double> {
    if (validation.empty()) return std::nullopt;
    return evaluate(m, catalogs, validation, config.eval, config.text.max_tokens).overall.rates().at(1);
  };

  // Epoch 0: loss of the untouched model on a fixed slice of examples, eval mode.
  {
    std::mt19937_64 probe_rng(derive_seed(config.seed, "probe"));
    Rng unused(0);
    const std::size_t n = std::min<std::size_t>(examples.size(), 2048);
    double total = 0.0;
    for (std::size_t start = 0; start < n; start += config.train.batch_size) {
      const std::size_t end = std::min(n, start + config.train.batch_size);
      Tape tape;
      total += batch_loss(m, tape, std::span(examples).subspan(start, end - start), encoded, sampler,
                          config.train.negatives, Mode::eval, unused, probe_rng)
                   .value()[0] *
               static_cast<double>(end - start);
      tape.clear();
    }
    m.parameters().zero_grad();
    EpochStats s{0, total / static_cast<double>(n), validate()};
    result.history.push_back(s);
    if (on_epoch) on_epoch(s);
  }

  std::optional<double> best = result.history.front().validation_hits1;
  ParameterStore best_params = m.parameters();
  std::size_t stale = 0;

  for (std::size_t epoch = 1; epoch <= config.train.epochs; ++epoch) {
    std::shuffle(examples.begin(), examples.end(), shuffle_rng);
    double total = 0.0;
    for (std::size_t start = 0; start < examples.size(); start += config.train.batch_size) {
      const std::size_t end = std::min(examples.size(), start + config.train.batch_size);
      Tape tape;
      Var loss = batch_loss(m, tape, std::span(examples).subspan(start, end - start), encoded, sampler,
                            config.train.negatives, Mode::train, dropout_rng, negative_rng);
      const double value = loss.value()[0];
      if (!std::isfinite(value)) {
        throw DivergenceError(result.steps, "loss is " + format_double(value) + " in epoch " + std::to_string(epoch));
      }
      tape.backward(loss);
      optimizer_step(m.parameters(), config.optimizer);
      ++result.steps;
      total += value * static_cast<double>(end - start);
    }
    EpochStats s{epoch, total / static_cast<double>(examples.size()), validate()};
    result.history.push_back(s);
    if (on_epoch) on_epoch(s);

    if (!s.validation_hits1) {
      best_params = m.parameters();
      result.best_epoch = epoch;
      continue;
    }
    if (!best || *s.validation_hits1 > *best) {
      best = s.validation_hits1;
      best_params = m.parameters();
      result.best_epoch = epoch;
      stale = 0;
    } else if (config.train.patience > 0 && ++stale >= config.train.patience) {
      break;
    }
  }

  for (auto& p : m.parameters()) p.value = best_params.get(p.name).value;
  m.parameters().zero_grad();
  return result;
}

}  // namespace mae::harness
