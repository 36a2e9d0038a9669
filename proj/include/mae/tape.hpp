// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <initializer_list>
#include <string_view>
#include <vector>

#include "mae/parameter_store.hpp"
#include "mae/tensor.hpp"

namespace mae {

class Tape;

/// Handle to a value recorded on a Tape. Cheap to copy; valid until the tape
/// is cleared.
class Var {
 public:
  Var() = default;

  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }
  std::size_t size() const { return value().size(); }
  std::size_t id() const noexcept { return id_; }
  Tape* tape() const noexcept { return tape_; }
  bool valid() const noexcept { return tape_ != nullptr; }

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

/// Records one forward pass in topological order and replays it in reverse
/// to accumulate gradients. Parameter leaves write their gradients straight
/// into the owning ParameterStore.
class Tape {
 public:
  /// Propagates the node's output gradient into its inputs' gradient sinks.
  using BackwardFn = std::function<void(Tape&, std::size_t self)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Tensor value);
  /// Leaf referring to a tensor the caller keeps alive; never receives gradients.
  Var constant_ref(const Tensor& value);
  /// Leaf bound to a stored parameter. Frozen parameters behave as constants.
  Var parameter(ParameterStore& store, std::string_view name);

  /// Appends a computed node. The backward function is dropped when no input
  /// requires gradients.
  Var record(Tensor value, std::initializer_list<Var> inputs, BackwardFn backward);
  Var record(Tensor value, const std::vector<Var>& inputs, BackwardFn backward);

  const Tensor& value(std::size_t id) const;
  /// Output gradient of a node; valid inside its backward function.
  const Tensor& grad(std::size_t id) const;
  /// Gradient accumulator of an input, or nullptr when it needs none.
  Tensor* grad_sink(std::size_t id);
  bool requires_grad(std::size_t id) const;

  /// Reverse sweep from a scalar loss. Frees every recorded node afterwards.
  void backward(Var loss);

  void clear();
  std::size_t size() const noexcept { return nodes_.size(); }

 private:
  struct Node {
    Tensor owned;
    const Tensor* ref = nullptr;
    Tensor grad;
    Tensor* sink = nullptr;
    ParameterStore* store = nullptr;
    bool requires_grad = false;
    BackwardFn backward;
  };

  void check_owned(const Var& v) const;

  std::deque<Node> nodes_;
};

}  // namespace mae
