#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "impact/error.hpp"

namespace impact {

// Dense row-major matrix of doubles. Small and value-semantic; every dataset
// in this library fits in memory.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& data() noexcept { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// x^e for small integer exponents by repeated multiplication. Avoids
// std::pow so the operation count (and therefore the bit pattern) is fixed.
inline double ipow(double x, int e) {
  double acc = 1.0;
  for (int i = 0; i < e; ++i) acc *= x;
  return acc;
}

}  // namespace impact
