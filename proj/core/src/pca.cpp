#include "edgewise/pca.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "edgewise/errors.hpp"

namespace edgewise {

namespace {

constexpr double kTolerance = 1e-10;
constexpr std::size_t kMaxIterations = 10000;

std::vector<double> power_iteration(const std::vector<double>& cov, std::size_t d,
                                    double& eigenvalue_out) {
  // Deterministic start: normalized all-ones with a mild index taper so the
  // start vector is rarely orthogonal to the leading eigenvector.
  std::vector<double> v(d);
  for (std::size_t i = 0; i < d; ++i) {
    v[i] = 1.0 + static_cast<double>(i) / static_cast<double>(d + 1);
  }
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;

  std::vector<double> next(d);
  for (std::size_t iter = 0; iter < kMaxIterations; ++iter) {
    for (std::size_t r = 0; r < d; ++r) {
      double acc = 0.0;
      for (std::size_t c = 0; c < d; ++c) acc += cov[r * d + c] * v[c];
      next[r] = acc;
    }
    double next_norm = 0.0;
    for (double x : next) next_norm += x * x;
    next_norm = std::sqrt(next_norm);
    if (next_norm == 0.0) {
      // vector fell into the null space; the eigenvalue is 0
      eigenvalue_out = 0.0;
      return v;
    }
    double delta = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      next[i] /= next_norm;
      delta = std::max(delta, std::abs(next[i] - v[i]));
    }
    std::swap(v, next);
    if (delta < kTolerance) break;
  }
  // Rayleigh quotient
  double lambda = 0.0;
  for (std::size_t r = 0; r < d; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < d; ++c) acc += cov[r * d + c] * v[c];
    lambda += v[r] * acc;
  }
  eigenvalue_out = lambda;
  return v;
}

void fix_sign(std::vector<double>& axis) {
  std::size_t arg = 0;
  for (std::size_t i = 1; i < axis.size(); ++i) {
    if (std::abs(axis[i]) > std::abs(axis[arg])) arg = i;
  }
  if (axis[arg] < 0.0) {
    for (double& x : axis) x = -x;
  }
}

}  // namespace

Pca2Result pca2(const Dense& embeddings) {
  const std::size_t n = embeddings.rows();
  const std::size_t d = embeddings.cols();
  if (n < 3) throw InvalidArgument("pca2: need at least 3 rows");

  std::vector<double> mean(d, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) mean[c] += embeddings(r, c);
  }
  for (double& m : mean) m /= static_cast<double>(n);

  Dense centered(n, d);
  bool any_nonzero = false;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      centered(r, c) = embeddings(r, c) - mean[c];
      if (centered(r, c) != 0.0) any_nonzero = true;
    }
  }
  if (!any_nonzero) {
    throw NumericError("pca2: degenerate input, all rows are equal");
  }

  // sample covariance, denominator n-1
  std::vector<double> cov(d * d, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t a = 0; a < d; ++a) {
      const double va = centered(r, a);
      if (va == 0.0) continue;
      for (std::size_t b = 0; b < d; ++b) {
        cov[a * d + b] += va * centered(r, b);
      }
    }
  }
  const double inv = 1.0 / static_cast<double>(n - 1);
  for (double& x : cov) x *= inv;

  double total_variance = 0.0;
  for (std::size_t a = 0; a < d; ++a) total_variance += cov[a * d + a];

  Pca2Result result;
  result.components = Dense::zeros(2, d);
  std::vector<double> work = cov;
  std::array<std::vector<double>, 2> axes;
  for (std::size_t comp = 0; comp < 2; ++comp) {
    double lambda = 0.0;
    axes[comp] = power_iteration(work, d, lambda);
    if (lambda < 0.0) lambda = 0.0;  // covariance is PSD up to roundoff
    fix_sign(axes[comp]);
    result.eigenvalues[comp] = lambda;
    result.explained_variance[comp] =
        total_variance > 0.0 ? lambda / total_variance : 0.0;
    // deflate: work -= lambda * v v^T
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = 0; b < d; ++b) {
        work[a * d + b] -= lambda * axes[comp][a] * axes[comp][b];
      }
    }
    for (std::size_t c = 0; c < d; ++c) result.components(comp, c) = axes[comp][c];
  }

  result.coordinates = Dense::zeros(n, 2);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t comp = 0; comp < 2; ++comp) {
      double acc = 0.0;
      for (std::size_t c = 0; c < d; ++c) acc += centered(r, c) * axes[comp][c];
      result.coordinates(r, comp) = acc;
    }
  }
  return result;
}

}  // namespace edgewise
