#pragma once

#include <functional>
#include <string>
#include <vector>

#include "edgewise/parameters.hpp"

namespace edgewise {

struct GradCheckEntry {
  std::string name;
  double max_rel_error = 0.0;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
};

struct GradCheckReport {
  std::vector<GradCheckEntry> per_param;
  double max_rel_error = 0.0;
  bool pass = false;
};

/// Relative error between an analytic and a central-difference gradient.
/// Entries where |a|+|n| falls below the floor are compared absolutely
/// against tol * floor, which keeps near-zero gradients checkable.
double gradient_rel_error(double analytic, double numeric);

/// Central-difference check of `analytic` against loss(params +- h) per
/// parameter entry. `loss` must be deterministic; params are perturbed in
/// place and restored. Throws NumericError if the loss goes non-finite.
GradCheckReport finite_diff_check(Parameters& params,
                                  const std::function<double(const Parameters&)>& loss,
                                  const GradientMap& analytic, double h, double tol);

}  // namespace edgewise
