#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "edgewise/dense.hpp"

namespace edgewise {

/// Handle to a value recorded on a Tape.
struct Var {
  std::size_t id = 0;
};

/// Recorded computation for reverse-mode differentiation.
///
/// Every operation appends a node holding its forward value and a closure
/// that scatters the node's adjoint into its parents. Creation order is the
/// topological order, so the backward pass is a single reverse sweep that
/// visits each node exactly once; the fixed order makes gradient accumulation
/// bitwise reproducible. A Tape is confined to one worker at a time.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Leaf value (constant or trainable parameter). No gradient flows past it,
  /// but its own gradient is available after backward().
  Var input(Dense value);

  // ---- primitive operations -------------------------------------------

  /// (m x k) * (k x n) matrix product.
  Var matmul(Var a, Var b);
  /// Affine map of row-major inputs: x * transpose(w) + bias per row.
  /// w is (out x in), bias is (1 x out), x is (m x in); result is (m x out).
  Var linear(Var x, Var w, Var bias);
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  /// Elementwise scale * x + offset.
  Var affine(Var x, double scale, double offset = 0.0);
  Var hadamard(Var a, Var b);
  Var sigmoid(Var x);
  Var tanh(Var x);
  Var relu(Var x);
  /// Numerically safe softmax over each row (row-max subtracted).
  Var softmax_rows(Var x);
  /// Horizontal concatenation [a, b]; row counts must match.
  Var concat_cols(Var a, Var b);
  /// Select rows (duplicates allowed); backward scatters with accumulation.
  Var gather_rows(Var x, std::vector<std::size_t> rows);
  /// Stack `count` copies of a single-row value.
  Var repeat_rows(Var x, std::size_t count);
  Var transpose(Var x);
  /// Row sums: (m x n) -> (m x 1).
  Var sum_cols(Var x);
  Var sum_all(Var x);
  Var mean_all(Var x);
  Var square(Var x);
  /// Natural logarithm; caller keeps inputs positive (see clamp).
  Var log(Var x);
  /// Clamp to [lo, hi]; gradient passes through strictly inside the range.
  Var clamp(Var x, double lo, double hi);
  /// Cosine similarity of two equal-shape vectors -> scalar. Zero-norm input
  /// yields 0 with zero gradient.
  Var cosine(Var a, Var b);
  /// Elementwise min/max pairing. At ties the gradient is split evenly so the
  /// pair (min, max) stays symmetric under argument swap.
  Var min_pair(Var a, Var b);
  Var max_pair(Var a, Var b);
  /// Extract a single entry as a scalar node.
  Var entry(Var x, std::size_t r, std::size_t c);

  // ---- results ----------------------------------------------------------

  /// Reverse sweep seeded with d(output)/d(output) = 1. `output` must be
  /// scalar; throws ContractError otherwise. Gradients accumulate in reverse
  /// creation order. May be called once per tape.
  void backward(Var output);

  const Dense& value(Var v) const;
  /// Gradient of the backward output with respect to node v (zeros if the
  /// node was never reached).
  const Dense& grad(Var v);

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Dense value;
    // Scatters grads_[self] into parent gradients. Null for leaves.
    std::function<void(Tape&, std::size_t)> backprop;
  };

  Var push(Dense value, std::function<void(Tape&, std::size_t)> backprop);
  Dense& grad_buffer(std::size_t id);
  const Dense& node_value(std::size_t id) const { return nodes_[id].value; }

  std::vector<Node> nodes_;
  std::vector<Dense> grads_;         // lazily shaped; parallel to nodes_
  std::vector<char> grad_present_;
  bool backward_done_ = false;
};

}  // namespace edgewise
