#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "ssir/errors.hpp"

namespace ssir {

/// Regular n1 x n2 grid with uniform physical spacing between adjacent
/// cells (same unit in both axes). Cells are addressed (i, j) with
/// 0 <= i < rows, 0 <= j < cols; storage is row-major.
struct GridShape {
  int rows = 0;
  int cols = 0;
  double spacing = 1.0;

  void validate() const {
    if (rows < 1 || cols < 1)
      throw DimensionError("grid shape: rows and cols must be >= 1");
    if (!(spacing > 0.0))
      throw DimensionError("grid shape: spacing must be positive");
  }
  std::int64_t cells() const {
    return static_cast<std::int64_t>(rows) * cols;
  }
  std::int64_t flat(int i, int j) const {
    return static_cast<std::int64_t>(i) * cols + j;
  }
  bool contains(int i, int j) const {
    return i >= 0 && i < rows && j >= 0 && j < cols;
  }
  bool operator==(const GridShape&) const = default;
};

using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// p-variate field on a grid, cell-major and channel-minor: channel c of
/// cell (i, j) lives at values[(i*cols + j)*p + c].
class MultiField {
 public:
  MultiField(GridShape shape, int p)
      : shape_(shape), p_(p) {
    shape_.validate();
    if (p < 1) throw DimensionError("multi-field: channel count must be >= 1");
    values_.assign(static_cast<std::size_t>(shape_.cells()) * p_, 0.0);
  }
  MultiField(GridShape shape, int p, std::vector<double> values)
      : shape_(shape), p_(p), values_(std::move(values)) {
    shape_.validate();
    if (p < 1) throw DimensionError("multi-field: channel count must be >= 1");
    if (values_.size() != static_cast<std::size_t>(shape_.cells()) * p_)
      throw DimensionError("multi-field: value count does not match shape");
  }

  const GridShape& shape() const { return shape_; }
  int channels() const { return p_; }

  double& at(int i, int j, int c) {
    return values_[static_cast<std::size_t>(shape_.flat(i, j)) * p_ + c];
  }
  double at(int i, int j, int c) const {
    return values_[static_cast<std::size_t>(shape_.flat(i, j)) * p_ + c];
  }
  Eigen::Map<const Eigen::VectorXd> cell(int i, int j) const {
    return {values_.data() + shape_.flat(i, j) * p_, p_};
  }

  /// N x p view of the cell/channel table (one row per cell, row-major order).
  Eigen::Map<const RowMajorMatrix> as_matrix() const {
    return {values_.data(), shape_.cells(), p_};
  }
  Eigen::Map<RowMajorMatrix> as_matrix() {
    return {values_.data(), shape_.cells(), p_};
  }

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

 private:
  GridShape shape_;
  int p_ = 1;
  std::vector<double> values_;
};

/// Univariate field on a grid, row-major.
class ScalarField {
 public:
  explicit ScalarField(GridShape shape) : shape_(shape) {
    shape_.validate();
    values_.assign(static_cast<std::size_t>(shape_.cells()), 0.0);
  }
  ScalarField(GridShape shape, std::vector<double> values)
      : shape_(shape), values_(std::move(values)) {
    shape_.validate();
    if (values_.size() != static_cast<std::size_t>(shape_.cells()))
      throw DimensionError("scalar field: value count does not match shape");
  }

  const GridShape& shape() const { return shape_; }
  double& at(int i, int j) { return values_[shape_.flat(i, j)]; }
  double at(int i, int j) const { return values_[shape_.flat(i, j)]; }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

 private:
  GridShape shape_;
  std::vector<double> values_;
};

}  // namespace ssir
