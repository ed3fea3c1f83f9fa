#pragma once

#include <complex>
#include <vector>

#include "dfc/polynomial.hpp"

namespace dfc {

struct RootSet {
  std::vector<std::complex<double>> roots;  // with multiplicity
  int sweeps = 0;
  /// True when Aberth iteration stalled and the companion-matrix eigensolver
  /// supplied the roots instead.
  bool reduced_precision = false;
};

struct AberthOptions {
  double update_tol = 1e-12;
  int max_sweeps = 500;
};

/// All complex roots of p by Aberth-Ehrlich simultaneous iteration.
/// Throws DomainError when deg p < 1.
RootSet find_roots(const Polynomial& p, const AberthOptions& options = {});

std::vector<std::complex<double>> poly_roots(const Polynomial& p);

}  // namespace dfc
