#pragma once

#include <limits>
#include <span>

#include "fracalc/grid.hpp"

namespace fracalc {

constexpr double kInfinityP = std::numeric_limits<double>::infinity();

/// Compensated (Kahan) accumulator. Deterministic for a fixed visit order;
/// used for all long reductions in the convolution loops and norms.
class KahanSum {
public:
    void add(double x) {
        const double y = x - c_;
        const double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

double kahan_total(std::span<const double> xs);

/// Composite-trapezoid approximation of (integral |f|^p)^(1/p) skipping
/// excluded nodes; p = infinity returns max |f| over non-excluded nodes.
/// p < 1 is rejected.
double lp_norm(const SampledFunction& f, double p);

/// Trapezoid integral of the samples, skipping excluded nodes.
double trapezoid(const SampledFunction& f);

/// Trapezoid integral of f*g over nodes where neither factor is excluded.
double inner_product(const SampledFunction& f, const SampledFunction& g);

/// lp_norm restricted to nodes with x in [lo, hi] (and non-excluded).
double lp_norm_window(const SampledFunction& f, double p, double lo, double hi);

}  // namespace fracalc
