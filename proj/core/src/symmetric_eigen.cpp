#include "qae/symmetric_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace qae {

RealMatrix::RealMatrix(int n) : n_(n) {
  if (n < 1) {
    throw ArgumentError("matrix size must be positive, got " + std::to_string(n));
  }
  data_.assign(static_cast<std::size_t>(n) * n, 0.0);
}

bool RealMatrix::is_symmetric(double tol) const {
  for (int r = 0; r < n_; ++r) {
    for (int c = r + 1; c < n_; ++c) {
      if (std::abs(at(r, c) - at(c, r)) > tol) return false;
    }
  }
  return true;
}

namespace {

// Householder reduction of a symmetric matrix to tridiagonal form with
// accumulation of the orthogonal transformation in `a`. On exit `d` holds
// the diagonal and `e[1..n-1]` the subdiagonal.
void householder_tridiagonalize(RealMatrix& a, std::vector<double>& d, std::vector<double>& e) {
  const int n = a.size();
  for (int i = n - 1; i >= 1; --i) {
    const int l = i - 1;
    double h = 0.0;
    if (l > 0) {
      double scale = 0.0;
      for (int k = 0; k <= l; ++k) scale += std::abs(a.at(i, k));
      if (scale == 0.0) {
        e[i] = a.at(i, l);
      } else {
        for (int k = 0; k <= l; ++k) {
          a.at(i, k) /= scale;
          h += a.at(i, k) * a.at(i, k);
        }
        double f = a.at(i, l);
        double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        a.at(i, l) = f - g;
        f = 0.0;
        for (int j = 0; j <= l; ++j) {
          a.at(j, i) = a.at(i, j) / h;
          g = 0.0;
          for (int k = 0; k <= j; ++k) g += a.at(j, k) * a.at(i, k);
          for (int k = j + 1; k <= l; ++k) g += a.at(k, j) * a.at(i, k);
          e[j] = g / h;
          f += e[j] * a.at(i, j);
        }
        const double hh = f / (h + h);
        for (int j = 0; j <= l; ++j) {
          f = a.at(i, j);
          g = e[j] - hh * f;
          e[j] = g;
          for (int k = 0; k <= j; ++k) {
            a.at(j, k) -= f * e[k] + g * a.at(i, k);
          }
        }
      }
    } else {
      e[i] = a.at(i, l);
    }
    d[i] = h;
  }
  d[0] = 0.0;
  e[0] = 0.0;
  for (int i = 0; i < n; ++i) {
    const int l = i - 1;
    if (d[i] != 0.0) {
      for (int j = 0; j <= l; ++j) {
        double g = 0.0;
        for (int k = 0; k <= l; ++k) g += a.at(i, k) * a.at(k, j);
        for (int k = 0; k <= l; ++k) a.at(k, j) -= g * a.at(k, i);
      }
    }
    d[i] = a.at(i, i);
    a.at(i, i) = 1.0;
    for (int j = 0; j <= l; ++j) {
      a.at(j, i) = 0.0;
      a.at(i, j) = 0.0;
    }
  }
}

// QL iteration with implicit shifts on a symmetric tridiagonal matrix,
// rotating the accumulated transformation `z` so its columns become the
// eigenvectors of the original matrix.
void ql_implicit_shift(std::vector<double>& d, std::vector<double>& e, RealMatrix& z) {
  const int n = static_cast<int>(d.size());
  constexpr int kMaxSweeps = 50;
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m != l) {
        if (iter++ == kMaxSweeps) {
          throw NumericError("QL iteration failed to converge after " +
                             std::to_string(kMaxSweeps) + " sweeps");
        }
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        bool underflow = false;
        for (int i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (int k = 0; k < n; ++k) {
            f = z.at(k, i + 1);
            z.at(k, i + 1) = s * z.at(k, i) + c * f;
            z.at(k, i) = c * z.at(k, i) - s * f;
          }
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

SymmetricEigenResult symmetric_eigen(const RealMatrix& matrix) {
  const int n = matrix.size();
  if (!matrix.is_symmetric(1e-10)) {
    throw ArgumentError("matrix is not symmetric within 1e-10");
  }

  RealMatrix work = matrix;
  std::vector<double> d(n, 0.0);
  std::vector<double> e(n, 0.0);
  if (n == 1) {
    d[0] = work.at(0, 0);
    work.at(0, 0) = 1.0;
  } else {
    householder_tridiagonalize(work, d, e);
    ql_implicit_shift(d, e, work);
  }

  // Sort eigenpairs ascending.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) { return d[x] < d[y]; });

  SymmetricEigenResult result{std::vector<double>(n), RealMatrix(n)};
  for (int j = 0; j < n; ++j) {
    result.values[j] = d[order[j]];
    for (int k = 0; k < n; ++k) result.vectors.at(k, j) = work.at(k, order[j]);
  }
  return result;
}

}  // namespace qae
