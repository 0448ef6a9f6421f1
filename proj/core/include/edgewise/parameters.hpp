#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "edgewise/dense.hpp"
#include "edgewise/tape.hpp"

namespace edgewise {

/// Gradients keyed by parameter name. std::map keeps a deterministic order.
using GradientMap = std::map<std::string, Dense, std::less<>>;

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Named trainable matrices plus per-matrix Adam moments. Registration order
/// is preserved and defines the order of every deterministic iteration.
class Parameters {
 public:
  Dense& add(std::string name, Dense value);
  bool contains(std::string_view name) const;
  Dense& at(std::string_view name);
  const Dense& at(std::string_view name) const;

  std::size_t count() const { return slots_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  std::int64_t step() const { return step_; }

  /// Total number of scalar entries across all matrices.
  std::size_t scalar_count() const;

  friend void adam_step(Parameters& params, const GradientMap& grads,
                        const AdamConfig& cfg);

 private:
  struct Slot {
    Dense value;
    Dense m;  // first moment
    Dense v;  // second moment
  };

  std::size_t index_of(std::string_view name) const;

  std::vector<std::string> names_;
  std::vector<Slot> slots_;
  std::unordered_map<std::string, std::size_t> index_;
  std::int64_t step_ = 0;
};

/// Glorot-uniform matrix: entries uniform in [-a, a], a = sqrt(6/(rows+cols)).
/// Deterministic for a given seed.
Dense glorot_init(std::size_t rows, std::size_t cols, std::uint64_t seed);

/// One Adam update with bias correction; increments the shared step counter.
/// Gradient shapes must match parameter shapes (missing names are treated as
/// zero gradient, which leaves those parameters unchanged).
void adam_step(Parameters& params, const GradientMap& grads, const AdamConfig& cfg);

/// Tape leaves for every parameter of one forward/backward pass.
class BoundParams {
 public:
  BoundParams(Tape& tape, const Parameters& params);
  Var at(std::string_view name) const;
  const std::vector<std::pair<std::string, Var>>& vars() const { return vars_; }

 private:
  std::vector<std::pair<std::string, Var>> vars_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Gradients of the bound leaves after Tape::backward.
GradientMap collect_gradients(Tape& tape, const BoundParams& bound);

/// dst += scale * src for every entry of src (dst entries created as needed).
void accumulate(GradientMap& dst, const GradientMap& src, double scale = 1.0);

void scale_gradients(GradientMap& grads, double scale);

}  // namespace edgewise
