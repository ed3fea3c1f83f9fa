#pragma once

// Test-only reference computations. None of these call into the code paths
// they are used to check.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "dfc/matrix.hpp"
#include "dfc/polynomial.hpp"

namespace oracle {

inline double central_difference(const std::function<double(double)>& f, double x,
                                 double h = 1e-6) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Roots of f^T(x) - x by a dense uniform scan with linear interpolation.
inline std::vector<double> dense_fixed_points(const std::function<double(double)>& f, int period,
                                              double lo, double hi, int grid) {
  auto g = [&](double x) {
    double y = x;
    for (int i = 0; i < period; ++i) y = f(y);
    return y - x;
  };
  std::vector<double> roots;
  double x0 = lo, g0 = g(lo);
  if (g0 == 0.0) roots.push_back(lo);
  for (int i = 1; i < grid; ++i) {
    const double x1 = i + 1 == grid ? hi : lo + (hi - lo) * i / (grid - 1);
    const double g1 = g(x1);
    if (g1 == 0.0) {
      roots.push_back(x1);
    } else if (g0 != 0.0 && (g0 < 0.0) != (g1 < 0.0)) {
      roots.push_back(x0 - g0 * (x1 - x0) / (g1 - g0));
    }
    x0 = x1;
    g0 = g1;
  }
  return roots;
}

/// Eigenvalues of the companion matrix of p (LAPACK-style Hessenberg QR).
inline std::vector<std::complex<double>> eigen_roots(const dfc::Polynomial& p) {
  const auto c = p.coeffs();
  const auto n = static_cast<Eigen::Index>(c.size() - 1);
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) comp(i, n - 1) = -c[i] / c[n];
  Eigen::EigenSolver<Eigen::MatrixXd> solver(comp, false);
  return {solver.eigenvalues().begin(), solver.eigenvalues().end()};
}

inline double eigen_spectral_radius(const dfc::Polynomial& p) {
  double r = 0.0;
  for (auto z : eigen_roots(p)) r = std::max(r, std::abs(z));
  return r;
}

/// det(lambda I - M) at a complex point, by Eigen's partial-pivot LU.
inline std::complex<double> char_det(const dfc::RealMatrix& m, std::complex<double> lambda) {
  const auto n = static_cast<Eigen::Index>(m.rows());
  Eigen::MatrixXcd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      a(i, j) = (i == j ? lambda : 0.0) - m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
  }
  return a.partialPivLu().determinant();
}

/// Point drawn uniformly from the probability simplex of dimension n.
inline std::vector<double> simplex_point(std::mt19937_64& rng, int n) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> v(static_cast<std::size_t>(n));
  double s = 0.0;
  for (double& x : v) s += (x = e(rng));
  for (double& x : v) x /= s;
  return v;
}

inline double min_pairwise_distance(const std::vector<std::complex<double>>& z) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = i + 1; j < z.size(); ++j) d = std::min(d, std::abs(z[i] - z[j]));
  }
  return d;
}

/// Real polynomial with the given roots (conjugates must be supplied in pairs).
inline dfc::Polynomial from_roots(const std::vector<std::complex<double>>& roots) {
  std::vector<std::complex<double>> c{1.0};
  for (auto r : roots) {
    std::vector<std::complex<double>> next(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= r * c[k];
    }
    c = std::move(next);
  }
  std::vector<double> re(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) re[k] = c[k].real();
  return dfc::Polynomial(std::move(re));
}

}  // namespace oracle
