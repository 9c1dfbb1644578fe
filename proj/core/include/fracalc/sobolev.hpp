#pragma once

#include <vector>

#include "fracalc/grid.hpp"
#include "fracalc/operators.hpp"

namespace fracalc {
namespace sobolev {

enum class Side { Left, Right, Symmetric };

struct SobolevSpec {
    double alpha = 0.5;
    double p = 2.0;  // >= 1, or infinity
    Side side = Side::Left;
};

struct ExtensionResult {
    SampledFunction extended;
    double norm_ratio = 0.0;  // extended norm / original norm
};

/// One-sided fractional Sobolev norm (|u|_p^p + |D^alpha u|_p^p)^(1/p),
/// with the weak derivative realized by the RL scheme. The symmetric norm
/// is the p-sum of the two one-sided norms (additive at p = infinity).
double frac_sobolev_norm(const SampledFunction& u, const SobolevSpec& spec);

/// Gagliardo double-integral seminorm
/// (iint |u(x)-u(y)|^p / |x-y|^(1+sigma p) dx dy)^(1/p), midpoint rule off
/// the diagonal band |i-j| <= 1, whose contribution is restored by the
/// local-Lipschitz closed form.
double gagliardo_seminorm(const SampledFunction& u, double sigma, double p);

/// Spectral seminorm ((1/2pi) int |xi|^(2s) |u^(xi)|^2 dxi)^(1/2) under the
/// transform F[u](xi) = int e^(-i xi x) u dx. The 1/2pi factor makes the
/// seminorm Plancherel-consistent: it equals |u|_L2 in the s -> 0 limit and
/// |D^alpha u|_L2 at s = alpha for compactly supported smooth u.
double fourier_seminorm(const SampledFunction& u, double s);

/// |D^alpha u|_L2 / fourier_seminorm(u, alpha); 1 for compactly supported
/// smooth u up to discretization error.
double h_alpha_equivalence_ratio(const SampledFunction& u, double alpha);

struct TraceResult {
    double value = 0.0;
    double norm_ratio = 0.0;  // |trace| / frac_sobolev_norm
};

/// One-sided boundary trace: u(b) for the left space, u(a) for the right.
/// Requires alpha*p > 1 with finite p. Falls back to 3-point extrapolation
/// when the endpoint node is excluded.
TraceResult trace(const SampledFunction& u, const SobolevSpec& spec);

struct PoincareResult {
    double ratio = 0.0;
    bool kernel_element = false;  // |D^alpha u| below 1e-12: u is c*kappa
    double c = 0.0;
    double numerator = 0.0;
    double denominator = 0.0;
};

/// |u - c kappa|_p / |D^alpha u|_p over the interior; a finite ratio
/// certifies the fractional Poincare inequality instance.
PoincareResult poincare_ratio(const SampledFunction& u, double alpha, double p,
                              Direction dir);

struct ConjugateScalingResult {
    double p_star = 0.0;
    std::vector<double> ratios;   // ratio at lambda = 0.5, 1, 2
    double max_deviation = 0.0;   // max relative deviation across dilations
};

/// |u|_p* / |D^alpha u|_p for u and its dilations u(lambda x); the ratio is
/// scale-invariant exactly when p* = p/(1-alpha p).
ConjugateScalingResult sobolev_conjugate_check(const SampledFunction& u, double alpha,
                                               double p);

/// Pollution tail of the classical derivative outside the support:
/// L'(x) = -alpha/Gamma(1-alpha) * int phi(y) (x-y)^(-1-alpha) dy for the
/// left direction at x beyond the support (right analog mirrored).
std::vector<double> pollution_tail(const SampledFunction& phi, double alpha, Direction dir,
                                   const std::vector<double>& x_eval);

/// Zero-extension of a compactly supported sample onto an enlarged window;
/// the extended norm picks up the pollution tail of the derivative.
ExtensionResult trivial_extension(const SampledFunction& u, double alpha, double p,
                                  double enlargement);

/// Exterior extension of u on (0,1) onto (-1,2): zero left, periodic copy
/// right (left variant), times a smooth cutoff that is identically 1 on
/// [0,1]. Requires alpha*p < 1 and mu > p/(1 - alpha p); the rejections
/// reproduce the necessity conditions.
ExtensionResult exterior_extension(const SampledFunction& u, double alpha, double p,
                                   double mu);

/// Max Holder quotient |u(x)-u(y)| / |x-y|^(alpha-1/p) over node pairs with
/// |x-y| >= 4h (the grid-pair surrogate for the Holder embedding).
double holder_quotient(const SampledFunction& u, double alpha, double p);

}  // namespace sobolev
}  // namespace fracalc
