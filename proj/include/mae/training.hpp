// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mae/catalogs.hpp"
#include "mae/config.hpp"
#include "mae/corpus.hpp"
#include "mae/model.hpp"

namespace mae::harness {

/// Model sizes for a run. The image dimension comes from the corpus; a
/// nonzero declared image.feature_dim must agree with it.
model::ModelSpec model_spec(const RunConfig& config, const data::Catalogs& catalogs, std::size_t corpus_image_dim);

struct EpochStats {
  std::size_t epoch = 0;
  /// Mean per-example loss. Epoch 0 holds the loss of the initial model.
  double mean_loss = 0.0;
  /// hits@1 on the validation split, when there is one.
  std::optional<double> validation_hits1;
};

struct TrainResult {
  model::Model model;
  std::vector<EpochStats> history;
  /// Epoch whose parameters were kept (0 = initialization).
  std::size_t best_epoch = 0;
  std::size_t steps = 0;
};

using EpochCallback = std::function<void(const EpochStats&)>;

/// Minibatch training on every (product, attribute, value) pair of the
/// training split, one sampled negative per example by default. Validation
/// hits@1 is measured after each epoch; the best parameters are kept and
/// training stops after `patience` epochs without improvement (0 disables
/// early stopping). Deterministic for a fixed config and seed. Throws
/// DivergenceError on a non-finite loss.
TrainResult train(const RunConfig& config, const data::Catalogs& catalogs, std::span<const data::ProductRecord> train,
                  std::span<const data::ProductRecord> validation, std::size_t image_dim,
                  const Tensor* pretrained_tokens = nullptr, const EpochCallback& on_epoch = {});

}  // namespace mae::harness
