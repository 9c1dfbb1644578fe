#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>

#include "fracalc/grid.hpp"
#include "fracalc/operators.hpp"

namespace fracalc {
namespace oracle {

/// Closed-form fractional derivative of the power law (x-a)^mu (left) or
/// (b-x)^mu (right): Gamma(mu+1)/Gamma(mu+1-alpha) * dist^(mu-alpha).
/// The reciprocal-Gamma convention makes the result identically zero at
/// mu = alpha - 1 (the kernel function). Requires mu > -1.
/// The returned callable takes x and evaluates the closed form; the
/// coefficient alone is available from power_law_derivative_coeff.
std::function<double(double)> power_law_derivative(double mu, double alpha, Direction dir,
                                                   double a, double b);
double power_law_derivative_coeff(double mu, double alpha);

/// Closed-form fractional integral of the power law:
/// Gamma(mu+1)/Gamma(mu+1+sigma) * dist^(mu+sigma). Requires mu > -1.
std::function<double(double)> power_law_integral(double mu, double sigma, Direction dir,
                                                 double a, double b);
double power_law_integral_coeff(double mu, double sigma);

/// Closed-form left weak derivative of the step function
/// (lambda on (-1,0), mu on (0,1)):
///   lambda (x+1)^(-alpha) / Gamma(1-alpha)                    on (-1,0],
///   [lambda (x+1)^(-alpha) + (mu-lambda) x^(-alpha)] / Gamma(1-alpha)
///                                                             on (0,1).
std::function<double(double)> step_weak_derivative(double lambda, double mu, double alpha);

enum class CaseKind { PowerLaw, Constant, StepFunction, KernelFunction, GaussianLine };
enum class Query { Value, RLIntegral, RLDerivative };

/// A closed-form reference case. Parameters by kind:
///   PowerLaw:       mu;    Constant: c;    StepFunction: lambda, mu;
///   KernelFunction: alpha; GaussianLine: sigma (standard deviation).
/// Domain endpoints a, b always present. Direction fixes which endpoint the
/// power laws are anchored at.
struct OracleCase {
    CaseKind kind = CaseKind::Constant;
    std::map<std::string, double> params;
    double a = 0.0;
    double b = 1.0;
    Direction direction = Direction::Left;
};

/// Exact evaluation; std::nullopt means "no closed form" (a first-class
/// answer, e.g. the RL derivative of a Gaussian). Throws for points outside
/// [a,b] and for parameter errors.
std::optional<double> reference(const OracleCase& c, Query q, double point, double order);

/// Samples the case's plain values on a grid, masking singular endpoints.
SampledFunction sample_case(const OracleCase& c, const Grid& g);

/// Documentation dump: one entry per case kind with formula string and
/// validity domain.
std::string catalog_json();

}  // namespace oracle
}  // namespace fracalc
