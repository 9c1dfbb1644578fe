#pragma once

#include <complex>
#include <optional>
#include <string>

#include "fracalc/grid.hpp"

namespace fracalc {

enum class Direction { Left, Right };
enum class Family { RiemannLiouville, Caputo, GrunwaldLetnikov, Fourier, WeakCaputo };
enum class Scheme { ProductTrapezoid, GLSum, FFTSpectral, CompositeCaputo };

/// Order/direction/family triple selecting a fractional operator.
struct FracSpec {
    double alpha = 0.5;
    Direction direction = Direction::Left;
    Family family = Family::RiemannLiouville;
};

struct OperatorResult {
    SampledFunction output;
    Scheme scheme = Scheme::ProductTrapezoid;
    std::optional<double> estimated_order;
};

std::string to_string(Direction d);
std::string to_string(Family f);
std::string to_string(Scheme s);

/// Riemann-Liouville fractional integral of order sigma in (0,2).
///
/// The integrand is replaced by its piecewise-linear interpolant and
/// integrated against the kernel (x-y)^(sigma-1) in closed form, cell by
/// cell, so the kernel singularity needs no regularization. When the
/// initial endpoint node is excluded (singular sample, e.g. the kernel
/// function), the cells nearest that endpoint use a local power-law model
/// fitted through the adjacent samples instead of the linear interpolant.
OperatorResult rl_integral(const SampledFunction& f, double sigma, Direction dir);

/// Riemann-Liouville fractional derivative of order alpha in (0,1),
/// D^alpha f = d/dx I^(1-alpha) f.
///
/// For a regular initial endpoint the computation splits off the boundary
/// kernel term exactly: D^alpha f = f(a) (x-a)^(-alpha)/Gamma(1-alpha)
/// + d/dx I^(1-alpha)(f - f(a)), with the remaining smooth part
/// differentiated by second-order stencils. For an excluded (singular)
/// initial endpoint the full I^(1-alpha) f is formed with the power-law
/// cell model and differentiated directly. `boundary_value` substitutes for
/// the initial endpoint sample when that node is excluded.
OperatorResult rl_derivative(const SampledFunction& f, double alpha, Direction dir,
                             std::optional<double> boundary_value = std::nullopt);

/// Caputo derivative, defined discretely as the Riemann-Liouville
/// derivative minus the boundary kernel term, so the identity
/// Caputo = RL - f(a) (x-a)^(-alpha)/Gamma(1-alpha) holds exactly.
/// Requires the initial endpoint value (sample or boundary_value).
OperatorResult caputo_derivative(const SampledFunction& f, double alpha, Direction dir,
                                 std::optional<double> boundary_value = std::nullopt);

/// Weak Caputo derivative I^(1-alpha)(Du). Same algorithm as
/// caputo_derivative; kept as a distinct entry point because it realizes
/// the weak-calculus object (weak RL derivative minus boundary kernel term).
OperatorResult weak_caputo(const SampledFunction& f, double alpha, Direction dir,
                           std::optional<double> boundary_value = std::nullopt);

/// Grunwald-Letnikov derivative with the grid spacing as the GL step.
/// Left: h^(-alpha) sum_k w_k f(x - kh). The right-direction sum uses the
/// sign convention that agrees with the right RL derivative on C^1
/// functions; the alternative sign makes the alpha -> 1 limit come out as
/// +f' instead of -f'.
OperatorResult gl_derivative(const SampledFunction& f, double alpha, Direction dir);

/// Spectral fractional derivative on a TruncatedLine window: zero-pad
/// (32x for desk-scale grids, so the slowly decaying pollution tail does
/// not wrap around), DFT, multiply mode xi by the principal branch
/// (i xi)^alpha = |xi|^alpha exp(i alpha pi sgn(xi)/2), inverse transform,
/// return the real part. The relative imaginary residue must stay below
/// 1e-8 or the window is deemed inadequate.
OperatorResult fourier_derivative(const SampledFunction& f, double alpha);

/// Dispatch on FracSpec. Orders alpha >= 1 decompose as m = [alpha]
/// ordinary derivatives applied after the fractional-part operator.
OperatorResult apply(const SampledFunction& f, const FracSpec& spec);

/// (i xi)^alpha on the principal branch; exposed for tests of the spectral
/// multiplier.
std::complex<double> fourier_multiplier(double xi, double alpha);

/// Second-order first derivative of the samples (central interior,
/// one-sided second-order at the ends). Excluded nodes propagate.
SampledFunction stencil_derivative(const SampledFunction& f);

/// Kernel-weighted product quadrature used by rl_integral, without the
/// 1/Gamma(sigma) prefactor: out(i) = integral of the piecewise-linear
/// interpolant of `values` against |x_i - y|^(sigma-1) over the domain side
/// selected by `dir`. `singular_initial` enables the power-law cell model
/// next to the initial endpoint. Building block for the calculus module's
/// remainder integrals.
std::vector<double> kernel_quadrature(const Grid& grid, const std::vector<double>& values,
                                      double sigma, Direction dir, bool singular_initial);

/// Single-node variant of kernel_quadrature (O(distance) instead of
/// O(n^2)); used where the integrand itself depends on the output node.
double kernel_quadrature_at(const Grid& grid, const std::vector<double>& values,
                            double sigma, Direction dir, std::size_t node);

/// Decay guard for TruncatedLine inputs: max |f| over the outermost 1% of
/// nodes must be <= 1e-8 * max |f|, else TruncationUnsafeError.
void check_truncation_safe(const SampledFunction& f);

}  // namespace fracalc
