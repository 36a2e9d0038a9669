// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mae/tensor.hpp"

namespace mae {

/// One learnable tensor plus its gradient buffer and optimizer moments.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;
  Tensor first_moment;
  Tensor second_moment;
  bool trainable = true;
};

/// Named parameters in insertion order. Element addresses are stable for the
/// lifetime of the store, so tapes may bind to them directly.
class ParameterStore {
 public:
  Parameter& add(std::string name, Tensor init, bool trainable = true);

  bool contains(std::string_view name) const;
  Parameter& get(std::string_view name);
  const Parameter& get(std::string_view name) const;
  const Tensor& value(std::string_view name) const { return get(name).value; }
  Tensor& value(std::string_view name) { return get(name).value; }

  std::size_t size() const noexcept { return params_.size(); }
  auto begin() { return params_.begin(); }
  auto end() { return params_.end(); }
  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }
  std::vector<std::string> names() const;
  std::size_t element_count() const;

  void zero_grad();
  void note_gradients() noexcept { has_gradients_ = true; }
  bool has_gradients() const noexcept { return has_gradients_; }

  std::uint64_t step_count() const noexcept { return steps_; }
  void advance_step() noexcept { ++steps_; }

  /// True when names, shapes and values all match exactly.
  bool same_values(const ParameterStore& other) const;

 private:
  std::deque<Parameter> params_;
  std::unordered_map<std::string, std::size_t> index_;
  bool has_gradients_ = false;
  std::uint64_t steps_ = 0;
};

struct OptimizerConfig {
  enum class Kind { sgd, adam };
  Kind kind = Kind::adam;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Applies one SGD or Adam update to every trainable parameter and zeroes the
/// gradient buffers. Throws ContractError when no backward pass has populated
/// gradients since the previous step.
void optimizer_step(ParameterStore& store, const OptimizerConfig& config);

}  // namespace mae
