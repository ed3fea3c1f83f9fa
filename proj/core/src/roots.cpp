#include "dfc/roots.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dfc/error.hpp"

namespace dfc {
namespace {

using cplx = std::complex<double>;

// p(z), p'(z) and the rounding-error bound sum |c_k| |z|^k.
struct Horner {
  cplx value;
  cplx deriv;
  double bound;
};

Horner horner(std::span<const double> c, cplx z) {
  cplx v = 0.0, d = 0.0;
  double b = 0.0;
  const double az = std::abs(z);
  for (auto k = c.size(); k-- > 0;) {
    d = d * z + v;
    v = v * z + c[k];
    b = b * az + std::abs(c[k]);
  }
  return {v, d, b};
}

std::vector<cplx> companion_eigenvalues(std::span<const double> c) {
  const auto n = static_cast<Eigen::Index>(c.size() - 1);
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) comp(i, n - 1) = -c[i] / c[n];
  Eigen::EigenSolver<Eigen::MatrixXd> solver(comp, false);
  std::vector<cplx> out(solver.eigenvalues().begin(), solver.eigenvalues().end());
  return out;
}

}  // namespace

RootSet find_roots(const Polynomial& p, const AberthOptions& options) {
  if (p.degree() < 1) throw DomainError("root finding needs a polynomial of degree >= 1");
  RootSet out;

  // Exact zero roots factor out first.
  std::size_t zeros = 0;
  while (p[zeros] == 0.0) ++zeros;
  out.roots.assign(zeros, cplx(0.0));
  std::vector<double> c(p.coeffs().begin() + static_cast<long>(zeros), p.coeffs().end());
  const std::size_t n = c.size() - 1;
  if (n == 0) return out;
  if (n == 1) {
    out.roots.emplace_back(-c[0] / c[1]);
    return out;
  }

  // Initial guesses on a circle of radius (|c_0| / |c_n|)^{1/n}, rotated off
  // the real axis so conjugate pairs are not started symmetrically.
  const double radius = std::pow(std::abs(c[0] / c[n]), 1.0 / static_cast<double>(n));
  std::vector<cplx> z(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double angle = 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.25) / n + 0.4;
    z[k] = std::polar(radius, angle);
  }

  constexpr double eps = std::numeric_limits<double>::epsilon();
  std::vector<bool> done(n, false);
  bool converged = false;
  for (int sweep = 1; sweep <= options.max_sweeps && !converged; ++sweep) {
    out.sweeps = sweep;
    converged = true;
    for (std::size_t k = 0; k < n; ++k) {
      if (done[k]) continue;
      const Horner h = horner(c, z[k]);
      if (std::abs(h.value) <= 4.0 * n * eps * h.bound) {
        done[k] = true;
        continue;
      }
      const cplx ratio = h.value / h.deriv;
      cplx repulsion = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != k) repulsion += 1.0 / (z[k] - z[j]);
      }
      const cplx step = ratio / (1.0 - ratio * repulsion);
      if (std::isfinite(step.real()) && std::isfinite(step.imag())) z[k] -= step;
      if (std::abs(step) <= options.update_tol * (1.0 + std::abs(z[k]))) {
        done[k] = true;
      } else {
        converged = false;
      }
    }
  }

  bool finite = std::all_of(z.begin(), z.end(), [](cplx w) {
    return std::isfinite(w.real()) && std::isfinite(w.imag());
  });
  if (!converged || !finite) {
    z = companion_eigenvalues(c);
    out.reduced_precision = true;
  }
  out.roots.insert(out.roots.end(), z.begin(), z.end());
  return out;
}

std::vector<std::complex<double>> poly_roots(const Polynomial& p) { return find_roots(p).roots; }

}  // namespace dfc
