#include "edgewise/dense.hpp"

#include <algorithm>
#include <cmath>

#include "edgewise/errors.hpp"

namespace edgewise {

Dense::Dense(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
  if (rows == 0 || cols == 0) {
    throw InvalidArgument("dense: dimensions must be at least 1x1");
  }
}

Dense::Dense(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (rows == 0 || cols == 0) {
    throw InvalidArgument("dense: dimensions must be at least 1x1");
  }
  if (data_.size() != rows * cols) {
    throw InvalidArgument("dense: data length does not match rows*cols");
  }
}

Dense Dense::identity(std::size_t n) {
  Dense m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Dense Dense::row_vector(std::vector<double> values) {
  const std::size_t n = values.size();
  return Dense(1, n, std::move(values));
}

Dense Dense::column_vector(std::vector<double> values) {
  const std::size_t n = values.size();
  return Dense(n, 1, std::move(values));
}

Dense Dense::scalar(double value) { return Dense(1, 1, {value}); }

bool Dense::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

void Dense::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

double max_abs_diff(const Dense& a, const Dense& b) {
  if (!a.same_shape(b)) {
    throw ContractError("max_abs_diff: shape mismatch");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  return worst;
}

}  // namespace edgewise
