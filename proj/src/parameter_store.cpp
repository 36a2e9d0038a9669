// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#include "mae/parameter_store.hpp"

#include <cmath>

#include "mae/errors.hpp"

namespace mae {

Parameter& ParameterStore::add(std::string name, Tensor init, bool trainable) {
  if (index_.contains(name)) throw ContractError("duplicate parameter name '" + name + "'");
  if (init.empty()) throw DimensionError("parameter '" + name + "' has no shape");
  Parameter p;
  p.grad = Tensor(init.shape());
  p.first_moment = Tensor(init.shape());
  p.second_moment = Tensor(init.shape());
  p.value = std::move(init);
  p.name = name;
  p.trainable = trainable;
  index_.emplace(std::move(name), params_.size());
  params_.push_back(std::move(p));
  return params_.back();
}

bool ParameterStore::contains(std::string_view name) const { return index_.contains(std::string(name)); }

Parameter& ParameterStore::get(std::string_view name) {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) throw ContractError("unknown parameter '" + std::string(name) + "'");
  return params_[it->second];
}

const Parameter& ParameterStore::get(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) throw ContractError("unknown parameter '" + std::string(name) + "'");
  return params_[it->second];
}

std::vector<std::string> ParameterStore::names() const {
  std::vector<std::string> out;
  out.reserve(params_.size());
  for (const auto& p : params_) out.push_back(p.name);
  return out;
}

std::size_t ParameterStore::element_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p.value.size();
  return n;
}

void ParameterStore::zero_grad() {
  for (auto& p : params_) p.grad.fill(0.0);
  has_gradients_ = false;
}

bool ParameterStore::same_values(const ParameterStore& other) const {
  if (params_.size() != other.params_.size()) return false;
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (params_[i].name != other.params_[i].name || params_[i].value != other.params_[i].value) return false;
  }
  return true;
}

void optimizer_step(ParameterStore& store, const OptimizerConfig& config) {
  if (!store.has_gradients()) throw ContractError("optimizer_step called without populated gradients");
  store.advance_step();
  const double t = static_cast<double>(store.step_count());
  const double bias1 = 1.0 - std::pow(config.beta1, t);
  const double bias2 = 1.0 - std::pow(config.beta2, t);

  for (auto& p : store) {
    if (!p.trainable) continue;
    auto value = p.value.data();
    auto grad = p.grad.data();
    if (config.kind == OptimizerConfig::Kind::sgd) {
      for (std::size_t i = 0; i < value.size(); ++i) value[i] -= config.learning_rate * grad[i];
      continue;
    }
    auto m = p.first_moment.data();
    auto v = p.second_moment.data();
    for (std::size_t i = 0; i < value.size(); ++i) {
      m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * grad[i];
      v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * grad[i] * grad[i];
      const double m_hat = m[i] / bias1;
      const double v_hat = v[i] / bias2;
      value[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
    }
  }
  store.zero_grad();
}

}  // namespace mae
