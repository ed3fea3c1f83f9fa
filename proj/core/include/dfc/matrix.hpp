#pragma once

#include <cstddef>
#include <vector>

namespace dfc {

/// Dense row-major real matrix. Indices are 0-based.
class RealMatrix {
 public:
  RealMatrix(std::size_t rows, std::size_t cols);
  RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static RealMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  const std::vector<double>& entries() const { return entries_; }

  double trace() const;

  /// Largest elementwise |a - b|; matrices must have equal shapes.
  friend double max_abs_diff(const RealMatrix& a, const RealMatrix& b);
  friend RealMatrix operator*(const RealMatrix& a, const RealMatrix& b);

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> entries_;
};

/// Determinant by LU factorization with partial pivoting.
double determinant(RealMatrix m);

}  // namespace dfc
