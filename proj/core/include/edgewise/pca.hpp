#pragma once

#include <array>

#include "edgewise/dense.hpp"

namespace edgewise {

struct Pca2Result {
  Dense coordinates;                         // n x 2 projections
  std::array<double, 2> eigenvalues{};       // descending
  std::array<double, 2> explained_variance{};  // eigenvalue / total variance
  Dense components;                          // 2 x d principal axes
};

/// Projection onto the first two principal components: rows are
/// mean-centered, the top-2 eigenpairs of the sample covariance are found by
/// power iteration with deflation (tolerance 1e-10, at most 10,000
/// iterations), and each axis is sign-fixed so its largest-magnitude loading
/// is positive. Requires n >= 3 rows; throws NumericError when all rows are
/// equal (rank-0 input).
Pca2Result pca2(const Dense& embeddings);

}  // namespace edgewise
