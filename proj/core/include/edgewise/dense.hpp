#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace edgewise {

/// Dense row-major matrix of 64-bit floats. Vectors are 1xN or Nx1 matrices;
/// scalars are 1x1. Once produced by a forward pass, values are treated as
/// immutable and may be shared read-only across workers.
class Dense {
 public:
  Dense() = default;
  Dense(std::size_t rows, std::size_t cols);
  Dense(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Dense zeros(std::size_t rows, std::size_t cols) { return Dense(rows, cols); }
  static Dense identity(std::size_t n);
  static Dense row_vector(std::vector<double> values);
  static Dense column_vector(std::vector<double> values);
  static Dense scalar(double value);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::span<const double> values() const { return data_; }
  std::span<double> values() { return data_; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(data_).subspan(r * cols_, cols_);
  }

  bool same_shape(const Dense& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  bool is_scalar() const { return rows_ == 1 && cols_ == 1; }
  bool all_finite() const;

  void fill(double value);

  bool operator==(const Dense& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Largest absolute elementwise difference; shapes must match.
double max_abs_diff(const Dense& a, const Dense& b);

}  // namespace edgewise
