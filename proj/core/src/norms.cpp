#include "fracalc/norms.hpp"

#include <cmath>

namespace fracalc {

double kahan_total(std::span<const double> xs) {
    KahanSum s;
    for (double x : xs) s.add(x);
    return s.value();
}

namespace {

// Per-node trapezoid weight, zero for excluded nodes. Skipping an interior
// node drops its h-weight rather than redistributing it; excluded nodes are
// o(n) by contract so the bias is below quadrature error.
double node_weight(const SampledFunction& f, std::size_t i) {
    if (f.is_excluded(i)) return 0.0;
    const double h = f.grid.spacing();
    return (i == 0 || i == f.grid.n) ? 0.5 * h : h;
}

}  // namespace

double lp_norm(const SampledFunction& f, double p) {
    if (p == kInfinityP) {
        double m = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i)
            if (!f.is_excluded(i)) m = std::max(m, std::fabs(f.values[i]));
        return m;
    }
    if (!(p >= 1.0)) throw PreconditionError("lp_p_range", "lp_norm requires p >= 1");
    KahanSum s;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double w = node_weight(f, i);
        if (w > 0.0) s.add(w * std::pow(std::fabs(f.values[i]), p));
    }
    return std::pow(s.value(), 1.0 / p);
}

double trapezoid(const SampledFunction& f) {
    KahanSum s;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double w = node_weight(f, i);
        if (w > 0.0) s.add(w * f.values[i]);
    }
    return s.value();
}

double inner_product(const SampledFunction& f, const SampledFunction& g) {
    if (!(f.grid == g.grid))
        throw PreconditionError("grid_mismatch", "inner_product requires matching grids");
    KahanSum s;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f.is_excluded(i) || g.is_excluded(i)) continue;
        const double h = f.grid.spacing();
        const double w = (i == 0 || i == f.grid.n) ? 0.5 * h : h;
        s.add(w * f.values[i] * g.values[i]);
    }
    return s.value();
}

double lp_norm_window(const SampledFunction& f, double p, double lo, double hi) {
    if (p == kInfinityP) {
        double m = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double x = f.grid.node(i);
            if (!f.is_excluded(i) && x >= lo && x <= hi)
                m = std::max(m, std::fabs(f.values[i]));
        }
        return m;
    }
    if (!(p >= 1.0)) throw PreconditionError("lp_p_range", "lp_norm requires p >= 1");
    KahanSum s;
    const double h = f.grid.spacing();
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double x = f.grid.node(i);
        if (f.is_excluded(i) || x < lo || x > hi) continue;
        const bool edge = (i == 0 || i == f.grid.n || f.grid.node(i > 0 ? i - 1 : 0) < lo ||
                           f.grid.node(i < f.grid.n ? i + 1 : f.grid.n) > hi);
        s.add((edge ? 0.5 * h : h) * std::pow(std::fabs(f.values[i]), p));
    }
    return std::pow(s.value(), 1.0 / p);
}

}  // namespace fracalc
