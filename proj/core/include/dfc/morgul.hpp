#pragma once

#include <span>

#include "dfc/matrix.hpp"
#include "dfc/polynomial.hpp"

namespace dfc {

// Baseline single-gain control u(k) = K (x(k) - x(k-T)), lifted to the map
// G(z_1..z_{T+1}) = (z_2, ..., z_{T+1}, f(z_{T+1}) + K (z_{T+1} - z_1)).

/// lambda^{T+1} + c_T lambda^T + ... + c_0 with
///   c_{T-l} = -(-1)^l K^l * sum over l-subsets S of {1..T} of prod_{i not in S} (mu_i + K).
Polynomial morgul_char_poly(int period, std::span<const double> multipliers, double gain);

/// Jacobian of G^T along the orbit: product of T single-step Jacobians with
/// shift rows and last row (-K, 0, ..., 0, mu_j + K).
RealMatrix morgul_jacobian_product(int period, std::span<const double> multipliers, double gain);

}  // namespace dfc
