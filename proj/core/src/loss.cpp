#include "edgewise/loss.hpp"

#include <cmath>

#include "edgewise/errors.hpp"
#include "edgewise/log.hpp"

namespace edgewise {

namespace {

constexpr double kProbFloor = 1e-7;

/// Cross-entropy of probability `p` against a constant 0/1 label.
Var bce_const_label(Tape& tape, Var p, double label) {
  Var safe = tape.clamp(p, kProbFloor, 1.0 - kProbFloor);
  if (label == 1.0) {
    return tape.affine(tape.log(safe), -1.0);
  }
  return tape.affine(tape.log(tape.affine(safe, -1.0, 1.0)), -1.0);
}

/// Cross-entropy of probability `p` against a soft target probability node:
/// -(target*log(p) + (1-target)*log(1-p)). Gradients flow into both sides.
Var bce_soft_target(Tape& tape, Var p, Var target) {
  Var safe = tape.clamp(p, kProbFloor, 1.0 - kProbFloor);
  Var log_p = tape.log(safe);
  Var log_1p = tape.log(tape.affine(safe, -1.0, 1.0));
  Var pos = tape.hadamard(target, log_p);
  Var neg = tape.hadamard(tape.affine(target, -1.0, 1.0), log_1p);
  return tape.affine(tape.add(pos, neg), -1.0);
}

}  // namespace

Var cosine_embedding_target(Tape& tape, Var z_i, Var z_j) {
  const Dense& a = tape.value(z_i);
  const Dense& b = tape.value(z_j);
  auto norm_zero = [](const Dense& v) {
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (v[k] != 0.0) return false;
    }
    return true;
  };
  if (norm_zero(a) || norm_zero(b)) {
    log_warn("cosine target: zero-norm embedding, similarity defined as 0");
  }
  return tape.cosine(z_i, z_j);
}

double cosine_similarity_value(const Dense& a, const Dense& b) {
  if (!a.same_shape(b)) throw ContractError("cosine: shape mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

LossNodes composite_loss(Tape& tape, Var prediction, Var y_tilde,
                         std::optional<double> label, const TrainConfig& cfg) {
  if (!tape.value(prediction).is_scalar() || !tape.value(y_tilde).is_scalar()) {
    throw ContractError("composite_loss: prediction and y_tilde must be scalars");
  }
  const bool labeled = label.has_value();
  if (labeled && cfg.task == Task::kBinaryClassification && *label != 0.0 &&
      *label != 1.0) {
    throw InvalidArgument("composite_loss: classification label must be 0 or 1");
  }

  LossNodes out{};
  out.breakdown.labeled = labeled;

  Var total{};
  bool have_total = false;
  auto add_term = [&](Var term, double weight, double& slot) {
    slot = weight * tape.value(term)[0];
    Var weighted = tape.affine(term, weight);
    total = have_total ? tape.add(total, weighted) : weighted;
    have_total = true;
  };

  if (cfg.task == Task::kRegression) {
    if (labeled) {
      Var sup = tape.square(tape.affine(prediction, 1.0, -*label));
      add_term(sup, cfg.alpha, out.breakdown.supervised);
      Var cos = tape.square(tape.affine(y_tilde, 1.0, -*label));
      add_term(cos, cfg.beta, out.breakdown.cosine);
    }
    Var cospred = tape.square(tape.sub(prediction, y_tilde));
    add_term(cospred, cfg.gamma, out.breakdown.cosine_pred);
  } else {
    // y_tilde lives in [-1, 1]; rescale to a probability once and share it.
    Var p_tilde = tape.clamp(tape.affine(y_tilde, 0.5, 0.5), kProbFloor,
                             1.0 - kProbFloor);
    if (labeled) {
      add_term(bce_const_label(tape, prediction, *label), cfg.alpha,
               out.breakdown.supervised);
      add_term(bce_const_label(tape, p_tilde, *label), cfg.beta,
               out.breakdown.cosine);
    }
    add_term(bce_soft_target(tape, prediction, p_tilde), cfg.gamma,
             out.breakdown.cosine_pred);
  }

  out.total = total;
  out.breakdown.total = tape.value(total)[0];
  if (!std::isfinite(out.breakdown.total)) {
    throw NumericError("composite_loss: non-finite loss");
  }
  return out;
}

}  // namespace edgewise
