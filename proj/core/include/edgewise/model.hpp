#pragma once

#include <cstdint>
#include <vector>

#include "edgewise/config.hpp"
#include "edgewise/graph.hpp"
#include "edgewise/parameters.hpp"
#include "edgewise/tape.hpp"

namespace edgewise {

/// Two-stage edge-centric network: a tokenizer projects raw node features
/// into token space, a node-edge attention layer turns each center's
/// neighborhood into an embedding of width 2*token_dim, and a min/max
/// reordered MLP head maps the two center embeddings to one prediction.
class Model {
 public:
  explicit Model(ModelConfig cfg);

  const ModelConfig& config() const { return cfg_; }

  /// Create every trainable matrix (Glorot weights, zero biases) under a
  /// fixed naming scheme; deterministic for a given seed.
  Parameters init_params(std::uint64_t seed) const;

  /// Shape-check loaded parameters against this architecture.
  void validate_params(const Parameters& params) const;

  struct ForwardVars {
    Var prediction;  // scalar
    Var z_i;         // 1 x 2t, matches sub.center_i
    Var z_j;         // 1 x 2t, matches sub.center_j
  };

  /// Record the full forward pass for one pattern on `tape`.
  ForwardVars forward(Tape& tape, const BoundParams& params,
                      const PatternSubgraph& sub) const;

  /// Tokenizer output for raw feature rows (m x d -> m x t, entries in [-1,1]).
  Var tokenize(Tape& tape, const BoundParams& params, Var node_features) const;

  /// Attention weights over the neighbors of `target_local`, in the order of
  /// sub.local_adjacency[target_local]. Empty when the center is isolated.
  std::vector<double> attention_weights(const Parameters& params,
                                        const PatternSubgraph& sub,
                                        std::size_t target_local) const;

  struct Output {
    double prediction = 0.0;
    Dense z_i;
    Dense z_j;
  };

  /// Forward pass on a throwaway tape (no gradients).
  Output predict(const Parameters& params, const PatternSubgraph& sub) const;

  /// Embedding of a single node from its one-hop neighborhood. This is the
  /// quantity the neighbors-mode forward computes per center, which does not
  /// depend on the opposite center.
  Dense embed_node(const Parameters& params, const Graph& graph,
                   std::size_t node) const;

 private:
  Var embed_center(Tape& tape, const BoundParams& params,
                   const PatternSubgraph& sub, Var tokens,
                   std::size_t target_local) const;

  ModelConfig cfg_;
};

}  // namespace edgewise
