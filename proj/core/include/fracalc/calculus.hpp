#pragma once

#include <functional>
#include <map>
#include <string>

#include "fracalc/grid.hpp"
#include "fracalc/operators.hpp"

namespace fracalc {
namespace calculus {

/// Outcome of one identity check. `residual_norm` is an L2 residual over
/// the non-excluded interior (relative, unless noted in diagnostics);
/// pass <=> residual_norm <= tolerance.
struct ResidualReport {
    std::string identity_name;
    double residual_norm = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::map<std::string, double> diagnostics;
};

ResidualReport make_report(std::string name, double residual, double tolerance,
                           std::map<std::string, double> diagnostics = {});

std::string report_to_json(const ResidualReport& r);

/// F = c * kappa + I^alpha D^alpha F, split into its two pieces.
struct FtfcDecomposition {
    double c = 0.0;
    SampledFunction kernel_part;
    SampledFunction integral_part;
    double residual_rel = 0.0;  // |f - (kernel+integral)|_L2(interior) / |f|_L2
};

/// Endpoint limit of I^(1-alpha) f at the initial endpoint, divided by
/// Gamma(alpha). Extrapolates from the three nodes nearest the endpoint in
/// the basis {1, d^(1-alpha), d} matching the boundary expansion of
/// I^(1-alpha); the two- and three-term limits must agree to 1e-3 of the
/// data scale or an unstable-extrapolation error is thrown. Normalizing by
/// Gamma(alpha) makes the kernel function kappa come out at exactly c = 1.
double ftfc_constant(const SampledFunction& f, double alpha, Direction dir);

FtfcDecomposition ftfc_reconstruct(const SampledFunction& f, double alpha, Direction dir);

/// Smooth factor with analytic derivatives for the product/chain rules.
/// derivs[k-1] is the k-th derivative; missing entries fall back to
/// stencil differentiation of the previous one.
struct SmoothFn {
    std::function<double(double)> value;
    std::vector<std::function<double(double)>> derivs;
};

/// D^alpha(f psi) versus the m-term sum plus the remainder integral.
ResidualReport product_rule_check(const SampledFunction& f, const SmoothFn& psi,
                                  double alpha, Direction dir, unsigned m,
                                  double tolerance = 1e-3);

/// D^alpha phi(f) versus phi(f)/f * D^alpha f + R_0(f, phi(f)/f); the ratio
/// at zeros of f is taken as phi'(0).
ResidualReport chain_rule_check(const SampledFunction& f,
                                const std::function<double(double)>& phi,
                                const std::function<double(double)>& phi_prime,
                                double alpha, Direction dir, double tolerance = 1e-3);

/// Integration-by-parts residuals: derivative pairing
/// |int f D^alpha_+ g - int D^alpha_- f g| and the integral-operator analog,
/// both normalized by |f| |g|.
ResidualReport ibp_residual(const SampledFunction& f, const SampledFunction& g,
                            double alpha, double tolerance = 1e-3);

/// Tests Def 4.1: v == weak fractional derivative of u, against a battery
/// of scaled-translated bumps. The classical derivative of each zero-
/// extended test function is computed on a grid enlarged by one domain
/// length per side so the pollution tail is represented; on TruncatedLine
/// grids the far-tail mass beyond the enlarged window is closed with the
/// edge value of u. Excluded nodes of v mark one-sided singularities
/// (e.g. the jump point of a step function's weak derivative); the cells
/// next to them are integrated against a fitted power model.
ResidualReport weak_derivative_verify(const SampledFunction& u,
                                      const SampledFunction& v_candidate, double alpha,
                                      Direction dir, std::size_t battery_size,
                                      double tolerance = 0.02);

/// Mollification: discrete convolution with the compact bump
/// eta_eps(x) = C/eps * exp(-1/(1-(x/eps)^2)), C chosen so the discrete
/// mass is exactly 1. Requires eps >= 2h. Samples beyond the window are
/// taken as zero.
SampledFunction mollify(const SampledFunction& f, double epsilon);

/// exp(-1/(1-t^2)) on |t|<1 with t = (x-center)/halfwidth, else 0.
double smooth_bump(double x, double center, double halfwidth);

/// Relative L2 distance over non-excluded nodes at least `trim` * (b-a)
/// away from both endpoints.
double relative_l2_interior(const SampledFunction& approx, const SampledFunction& exact,
                            double trim = 0.05);

}  // namespace calculus
}  // namespace fracalc
