#pragma once

#include <limits>

#include "dfc/matrix.hpp"
#include "dfc/polynomial.hpp"

namespace dfc {

/// Sylvester matrix of f (degree n) and g (degree m), size (n+m) x (n+m).
/// The first m rows hold f's coefficients from the leading one down, each
/// row shifted one column right of the previous; the last n rows do the same
/// for g. With this layout R(lambda - a, lambda - b) = a - b and
/// R(lambda^2 - 1, 2 lambda) = -4.
RealMatrix sylvester_matrix(const Polynomial& f, const Polynomial& g);

/// det(sylvester_matrix(f, g)).
double resultant(const Polynomial& f, const Polynomial& g);

/// |R(p, p')| relative to ||p||^{n-1} ||p'||^n, the natural size of R for
/// p of degree n. Zero iff p has a repeated root.
double normalized_discriminant(const Polynomial& p);

/// True iff normalized_discriminant(p) <= tol. Polynomials of degree < 2
/// have no repeated roots. Rounding the coefficients of a polynomial with a
/// double root splits it by about sqrt(eps), which leaves a normalized
/// discriminant of order eps; hence the default.
bool has_repeated_roots(const Polynomial& p, double tol = std::numeric_limits<double>::epsilon());

}  // namespace dfc
