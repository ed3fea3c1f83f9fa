#pragma once

#include <span>

#include "dfc/gains.hpp"
#include "dfc/matrix.hpp"
#include "dfc/polynomial.hpp"

namespace dfc {

/// Dimension (N-1)T + 1 of the delay-embedded state.
std::size_t state_dimension(int n, int period);

/// Gain polynomial q(lambda) = a_N + a_{N-1} lambda + ... + a_1 lambda^{N-1}.
Polynomial gain_polynomial(const GainVector& a);

/// lambda^{(N-1)T+1} - mu q(lambda)^T.
Polynomial char_poly_closed(int n, int period, const GainVector& a, double mu);

/// Jacobian of one step of the delay map G at a point whose newest
/// coordinate has derivative `mu_at_step`: ones on the superdiagonal and
/// a_k * mu in the last row at column M - (k-1)T (1-based), M the dimension.
RealMatrix step_jacobian(int n, int period, const GainVector& a, double mu_at_step);

/// Chain rule for G^T along the orbit: S(mu_T) ... S(mu_1).
RealMatrix jacobian_via_chain(int n, int period, const GainVector& a,
                              std::span<const double> multipliers);

/// Jacobian of G^T from its explicit entry table (1-based i, j):
///   J(i, i+T) = 1;
///   for the last T rows, with r = i - (N-2)T - 1 and s = ((j-1) mod T) + 1 <= r,
///   J(i, j) = a_{N - floor((j-1)/T)} a_1^{r-s} mu_s ... mu_r;
///   zero elsewhere.
RealMatrix build_jacobian(int n, int period, const GainVector& a,
                          std::span<const double> multipliers);

inline constexpr std::size_t kMaxFaddeevDimension = 64;

/// det(lambda I - M) by the Faddeev-LeVerrier trace recursion. Monic.
/// Throws DomainError for non-square input or dimension above 64.
Polynomial char_poly_faddeev(const RealMatrix& m);

}  // namespace dfc
