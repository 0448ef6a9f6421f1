#include "edgewise/parameters.hpp"

#include <cmath>

#include "edgewise/errors.hpp"
#include "edgewise/rng.hpp"

namespace edgewise {

Dense& Parameters::add(std::string name, Dense value) {
  if (index_.contains(name)) {
    throw InvalidArgument("parameters: duplicate name '" + name + "'");
  }
  const std::size_t rows = value.rows();
  const std::size_t cols = value.cols();
  index_.emplace(name, slots_.size());
  names_.push_back(std::move(name));
  slots_.push_back(Slot{std::move(value), Dense::zeros(rows, cols),
                        Dense::zeros(rows, cols)});
  return slots_.back().value;
}

std::size_t Parameters::index_of(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) {
    throw LookupError("parameters: unknown name '" + std::string(name) + "'");
  }
  return it->second;
}

bool Parameters::contains(std::string_view name) const {
  return index_.contains(std::string(name));
}

Dense& Parameters::at(std::string_view name) { return slots_[index_of(name)].value; }

const Dense& Parameters::at(std::string_view name) const {
  return slots_[index_of(name)].value;
}

std::size_t Parameters::scalar_count() const {
  std::size_t total = 0;
  for (const Slot& s : slots_) total += s.value.size();
  return total;
}

Dense glorot_init(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  if (rows == 0 || cols == 0) {
    throw InvalidArgument("glorot_init: dimensions must be at least 1");
  }
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Rng rng(seed);
  Dense out(rows, cols);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = rng.uniform(-bound, bound);
  }
  return out;
}

void adam_step(Parameters& params, const GradientMap& grads, const AdamConfig& cfg) {
  params.step_ += 1;
  const double t = static_cast<double>(params.step_);
  const double m_corr = 1.0 - std::pow(cfg.beta1, t);
  const double v_corr = 1.0 - std::pow(cfg.beta2, t);
  for (std::size_t i = 0; i < params.names_.size(); ++i) {
    auto it = grads.find(params.names_[i]);
    if (it == grads.end()) continue;
    const Dense& g = it->second;
    Parameters::Slot& slot = params.slots_[i];
    if (!g.same_shape(slot.value)) {
      throw ContractError("adam_step: gradient shape mismatch for '" +
                          params.names_[i] + "'");
    }
    for (std::size_t k = 0; k < g.size(); ++k) {
      slot.m[k] = cfg.beta1 * slot.m[k] + (1.0 - cfg.beta1) * g[k];
      slot.v[k] = cfg.beta2 * slot.v[k] + (1.0 - cfg.beta2) * g[k] * g[k];
      const double m_hat = slot.m[k] / m_corr;
      const double v_hat = slot.v[k] / v_corr;
      slot.value[k] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
    }
  }
}

BoundParams::BoundParams(Tape& tape, const Parameters& params) {
  vars_.reserve(params.count());
  for (const std::string& name : params.names()) {
    index_.emplace(name, vars_.size());
    vars_.emplace_back(name, tape.input(params.at(name)));
  }
}

Var BoundParams::at(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) {
    throw LookupError("bound params: unknown name '" + std::string(name) + "'");
  }
  return vars_[it->second].second;
}

GradientMap collect_gradients(Tape& tape, const BoundParams& bound) {
  GradientMap out;
  for (const auto& [name, var] : bound.vars()) {
    out.emplace(name, tape.grad(var));
  }
  return out;
}

void accumulate(GradientMap& dst, const GradientMap& src, double scale) {
  for (const auto& [name, g] : src) {
    auto it = dst.find(name);
    if (it == dst.end()) {
      Dense scaled = g;
      for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] *= scale;
      dst.emplace(name, std::move(scaled));
    } else {
      if (!it->second.same_shape(g)) {
        throw ContractError("accumulate: gradient shape mismatch for '" + name + "'");
      }
      for (std::size_t i = 0; i < g.size(); ++i) it->second[i] += scale * g[i];
    }
  }
}

void scale_gradients(GradientMap& grads, double scale) {
  for (auto& [name, g] : grads) {
    (void)name;
    for (std::size_t i = 0; i < g.size(); ++i) g[i] *= scale;
  }
}

}  // namespace edgewise
