// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#include "mae/tape.hpp"

#include <set>

#include "mae/errors.hpp"

namespace mae {

const Tensor& Var::value() const {
  if (tape_ == nullptr) throw ContractError("use of an unbound Var");
  return tape_->value(id_);
}

Var Tape::constant(Tensor value) {
  Node n;
  n.owned = std::move(value);
  nodes_.push_back(std::move(n));
  return Var(this, nodes_.size() - 1);
}

Var Tape::constant_ref(const Tensor& value) {
  Node n;
  n.ref = &value;
  nodes_.push_back(std::move(n));
  return Var(this, nodes_.size() - 1);
}

Var Tape::parameter(ParameterStore& store, std::string_view name) {
  Parameter& p = store.get(name);
  Node n;
  n.ref = &p.value;
  if (p.trainable) {
    n.sink = &p.grad;
    n.store = &store;
    n.requires_grad = true;
  }
  nodes_.push_back(std::move(n));
  return Var(this, nodes_.size() - 1);
}

void Tape::check_owned(const Var& v) const {
  if (v.tape() != this) throw ContractError("Var belongs to a different tape");
}

Var Tape::record(Tensor value, std::initializer_list<Var> inputs, BackwardFn backward) {
  bool needs = false;
  for (const auto& in : inputs) {
    check_owned(in);
    needs = needs || nodes_[in.id()].requires_grad;
  }
  Node n;
  n.owned = std::move(value);
  n.requires_grad = needs;
  if (needs) n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return Var(this, nodes_.size() - 1);
}

Var Tape::record(Tensor value, const std::vector<Var>& inputs, BackwardFn backward) {
  bool needs = false;
  for (const auto& in : inputs) {
    check_owned(in);
    needs = needs || nodes_[in.id()].requires_grad;
  }
  Node n;
  n.owned = std::move(value);
  n.requires_grad = needs;
  if (needs) n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return Var(this, nodes_.size() - 1);
}

const Tensor& Tape::value(std::size_t id) const {
  const Node& n = nodes_.at(id);
  return n.ref != nullptr ? *n.ref : n.owned;
}

const Tensor& Tape::grad(std::size_t id) const { return nodes_.at(id).grad; }

Tensor* Tape::grad_sink(std::size_t id) {
  Node& n = nodes_.at(id);
  if (!n.requires_grad) return nullptr;
  if (n.sink != nullptr) return n.sink;
  if (n.grad.empty()) n.grad = Tensor(value(id).shape());
  return &n.grad;
}

bool Tape::requires_grad(std::size_t id) const { return nodes_.at(id).requires_grad; }

void Tape::backward(Var loss) {
  check_owned(loss);
  if (loss.size() != 1) {
    throw ContractError("backward needs a scalar loss, got shape " + loss.value().shape_string());
  }
  if (!nodes_[loss.id()].requires_grad) {
    clear();
    return;
  }
  if (Tensor* seed = grad_sink(loss.id())) (*seed)[0] += 1.0;

  std::set<ParameterStore*> touched;
  for (std::size_t i = loss.id() + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (n.store != nullptr) touched.insert(n.store);
    // Unreached nodes have no gradient buffer and nothing to propagate.
    if (!n.backward || n.grad.empty()) continue;
    n.backward(*this, i);
  }
  for (auto* store : touched) store->note_gradients();
  clear();
}

void Tape::clear() { nodes_.clear(); }

}  // namespace mae
