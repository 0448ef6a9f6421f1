#pragma once

#include <optional>

#include "edgewise/config.hpp"
#include "edgewise/dense.hpp"
#include "edgewise/tape.hpp"

namespace edgewise {

/// Weighted contributions of the three loss terms; their sum equals total.
struct LossBreakdown {
  double supervised = 0.0;   // alpha * term
  double cosine = 0.0;       // beta * term
  double cosine_pred = 0.0;  // gamma * term
  double total = 0.0;
  bool labeled = false;
};

struct LossNodes {
  Var total;
  LossBreakdown breakdown;
};

/// Cosine similarity of the two center embeddings (the self-supervised
/// target). Zero-norm inputs yield 0 with a warning.
Var cosine_embedding_target(Tape& tape, Var z_i, Var z_j);

/// Plain-value counterpart for evaluation paths.
double cosine_similarity_value(const Dense& a, const Dense& b);

/// The hybrid objective on the tape:
///   total = alpha * L_sup(pred, y) + beta * L_cos(y_tilde, y)
///         + gamma * L_cospred(pred, y_tilde)
/// Regression uses squared error per term. Binary classification uses
/// cross-entropy, with y_tilde mapped to a probability via (y_tilde + 1)/2
/// clamped to [1e-7, 1 - 1e-7]. Unlabeled patterns contribute only the
/// gamma term; the alpha and beta contributions are defined as zero.
LossNodes composite_loss(Tape& tape, Var prediction, Var y_tilde,
                         std::optional<double> label, const TrainConfig& cfg);

}  // namespace edgewise
