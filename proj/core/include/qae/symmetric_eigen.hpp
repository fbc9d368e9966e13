#pragma once

#include <span>
#include <vector>

#include "qae/errors.hpp"

namespace qae {

/// Dense square real matrix, row-major.
class RealMatrix {
 public:
  explicit RealMatrix(int n);

  int size() const { return n_; }
  double& at(int row, int col) { return data_[static_cast<std::size_t>(row) * n_ + col]; }
  double at(int row, int col) const { return data_[static_cast<std::size_t>(row) * n_ + col]; }
  std::span<const double> data() const { return data_; }

  bool is_symmetric(double tol) const;

 private:
  int n_;
  std::vector<double> data_;
};

struct SymmetricEigenResult {
  /// Ascending.
  std::vector<double> values;
  /// Column j is the unit eigenvector for values[j].
  RealMatrix vectors;
};

/// Full eigendecomposition of a real symmetric matrix: Householder reduction
/// to tridiagonal form followed by QL iteration with implicit shifts.
/// Throws NumericError if the QL sweep fails to converge.
SymmetricEigenResult symmetric_eigen(const RealMatrix& matrix);

}  // namespace qae
