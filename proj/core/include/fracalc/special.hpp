#pragma once

#include <cstddef>
#include <vector>

namespace fracalc {

/// Gamma function via the Lanczos approximation (g = 7, 9 coefficients),
/// with the reflection formula for x < 0.5. Accurate to better than 1e-12
/// relative on [1e-3, 170]. Throws PreconditionError at non-positive
/// integers (poles) and for arguments past the double overflow threshold.
double gamma(double x);

/// 1/Gamma(x) with the limit convention: returns exactly 0 at non-positive
/// integers (where Gamma has poles), matching lim_{z->pole} 1/Gamma(z) = 0.
double reciprocal_gamma(double x);

/// log|Gamma(x)| companion (same Lanczos core), valid away from poles.
double log_abs_gamma(double x);

/// sin(pi*x) computed from the reduced argument so that integer x gives
/// exactly zero.
double sin_pi(double x);

/// Grunwald-Letnikov weights w_k = (-1)^k Gamma(1+alpha) /
/// (Gamma(k+1) Gamma(alpha-k+1)) for k = 0..k_max, by the stable recurrence
/// w_0 = 1, w_k = w_{k-1} * (k-1-alpha) / k. Requires 0 < alpha < 1.
std::vector<double> gl_weights(double alpha, std::size_t k_max);

/// Gauss-Legendre nodes/weights on [0,1], generated once per order by
/// Newton iteration on the Legendre polynomial.
struct GaussRule {
    std::vector<double> nodes;    // in (0,1)
    std::vector<double> weights;  // sum to 1
};
const GaussRule& gauss_legendre_01(std::size_t order);

}  // namespace fracalc
