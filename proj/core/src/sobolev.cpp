#include "fracalc/sobolev.hpp"

#include <algorithm>
#include <cmath>

#include "fracalc/calculus.hpp"
#include "fracalc/fft.hpp"
#include "fracalc/norms.hpp"
#include "fracalc/special.hpp"

namespace fracalc {
namespace sobolev {

namespace {

double max_abs(const SampledFunction& f) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (!f.is_excluded(i)) m = std::max(m, std::fabs(f.values[i]));
    return m;
}

SampledFunction weak_derivative(const SampledFunction& u, double alpha, Direction dir) {
    if (alpha < 1.0) return rl_derivative(u, alpha, dir).output;
    FracSpec spec{alpha, dir, Family::RiemannLiouville};
    return apply(u, spec).output;
}

double one_sided_norm(const SampledFunction& u, double alpha, double p, Direction dir) {
    const SampledFunction du = weak_derivative(u, alpha, dir);
    std::vector<double> pieces{lp_norm(u, p), lp_norm(du, p)};
    // For alpha > 1 the base space is W^(m,p): integer derivatives join in.
    SampledFunction d = u;
    for (int k = 0; k < static_cast<int>(std::floor(alpha)); ++k) {
        d = stencil_derivative(d);
        pieces.push_back(lp_norm(d, p));
    }
    if (p == kInfinityP) {
        double s = 0.0;
        for (double v : pieces) s += v;
        return s;
    }
    KahanSum acc;
    for (double v : pieces) acc.add(std::pow(v, p));
    return std::pow(acc.value(), 1.0 / p);
}

}  // namespace

double frac_sobolev_norm(const SampledFunction& u, const SobolevSpec& spec) {
    if (!(spec.alpha > 0.0))
        throw PreconditionError("alpha_range", "sobolev norm requires alpha > 0");
    if (!(spec.p >= 1.0))
        throw PreconditionError("lp_p_range", "sobolev norm requires p >= 1");
    switch (spec.side) {
        case Side::Left:
            return one_sided_norm(u, spec.alpha, spec.p, Direction::Left);
        case Side::Right:
            return one_sided_norm(u, spec.alpha, spec.p, Direction::Right);
        case Side::Symmetric: {
            const double nl = one_sided_norm(u, spec.alpha, spec.p, Direction::Left);
            const double nr = one_sided_norm(u, spec.alpha, spec.p, Direction::Right);
            if (spec.p == kInfinityP) return nl + nr;
            return std::pow(std::pow(nl, spec.p) + std::pow(nr, spec.p), 1.0 / spec.p);
        }
    }
    throw PreconditionError("side", "unknown side");
}

double gagliardo_seminorm(const SampledFunction& u, double sigma, double p) {
    if (!u.excluded.empty())
        throw PreconditionError("excluded_nodes_unsupported",
                                "gagliardo_seminorm requires samples everywhere");
    if (!(sigma > 0.0 && sigma < 1.0))
        throw PreconditionError("sigma_range", "gagliardo requires sigma in (0,1)");
    if (!(p >= 1.0) || p == kInfinityP)
        throw PreconditionError("lp_p_range", "gagliardo requires finite p >= 1");
    const double band_expo = p * (1.0 - sigma);
    if (!(band_expo > 0.0))
        throw PreconditionError("band_correction", "p(1-sigma) <= 0: band integral diverges");

    const std::size_t n = u.grid.n;
    const double h = u.grid.spacing();
    std::vector<double> mid(n), dmid(n);
    for (std::size_t i = 0; i < n; ++i) {
        mid[i] = 0.5 * (u.values[i] + u.values[i + 1]);
        dmid[i] = (u.values[i + 1] - u.values[i]) / h;
    }
    // (d*h)^(-1-sigma p) lookup over cell separations.
    std::vector<double> kern(n, 0.0);
    for (std::size_t d = 2; d < n; ++d)
        kern[d] = std::pow(static_cast<double>(d) * h, -1.0 - sigma * p);

    const bool p_is_two = p == 2.0;
    KahanSum off_diag;
    for (std::size_t i = 0; i + 2 < n; ++i) {
        for (std::size_t j = i + 2; j < n; ++j) {
            const double dv = mid[i] - mid[j];
            const double num = p_is_two ? dv * dv : std::pow(std::fabs(dv), p);
            off_diag.add(num * kern[j - i]);
        }
    }
    double total = 2.0 * h * h * off_diag.value();

    // Band |i-j| <= 1, measure 3 n h^2, restored as the strip |x-y| <= 3h/2
    // under the local Lipschitz model u(x)-u(y) ~ u'(x)(x-y).
    const double strip = 2.0 * std::pow(1.5 * h, band_expo) / band_expo;
    KahanSum band;
    for (std::size_t i = 0; i < n; ++i)
        band.add(std::pow(std::fabs(dmid[i]), p));
    total += h * band.value() * strip;

    return std::pow(total, 1.0 / p);
}

double fourier_seminorm(const SampledFunction& u, double s) {
    if (u.grid.kind != DomainKind::TruncatedLine)
        throw PreconditionError("fourier_domain",
                                "fourier_seminorm requires a TruncatedLine grid");
    if (!u.excluded.empty())
        throw PreconditionError("excluded_nodes_unsupported",
                                "fourier_seminorm requires samples everywhere");
    if (!(s > 0.0 && s < 1.0))
        throw PreconditionError("s_range", "fourier_seminorm requires s in (0,1)");
    check_truncation_safe(u);

    const std::size_t count = u.size();
    const std::size_t pad = (count <= (1u << 17)) ? 32 : 4;
    const std::size_t m = next_pow2(pad * count);
    const double h = u.grid.spacing();
    std::vector<std::complex<double>> buf(m, {0.0, 0.0});
    for (std::size_t i = 0; i < count; ++i) buf[i] = {u.values[i], 0.0};
    fft_radix2(buf, -1);
    const double dxi = 2.0 * M_PI / (static_cast<double>(m) * h);
    KahanSum acc;
    for (std::size_t k = 0; k < m; ++k) {
        const double idx = (2 * k <= m) ? static_cast<double>(k)
                                        : static_cast<double>(k) - static_cast<double>(m);
        const double xi = std::fabs(idx) * dxi;
        if (xi == 0.0) continue;
        acc.add(std::pow(xi, 2.0 * s) * std::norm(buf[k]));
    }
    return std::sqrt(acc.value() * h / static_cast<double>(m));
}

double h_alpha_equivalence_ratio(const SampledFunction& u, double alpha) {
    const SampledFunction du = rl_derivative(u, alpha, Direction::Left).output;
    const double num = lp_norm(du, 2.0);
    const double den = fourier_seminorm(u, alpha);
    if (den == 0.0)
        throw PreconditionError("zero_function", "equivalence ratio of the zero function");
    return num / den;
}

TraceResult trace(const SampledFunction& u, const SobolevSpec& spec) {
    if (spec.side == Side::Symmetric)
        throw PreconditionError("trace_side", "trace is one-sided: pick Left or Right");
    if (spec.p == kInfinityP || !(spec.alpha * spec.p > 1.0))
        throw PreconditionError("alpha_p_le_1", "trace requires alpha*p > 1 with finite p");
    const std::size_t n = u.grid.n;
    const std::size_t end = (spec.side == Side::Left) ? n : 0;
    TraceResult t;
    if (!u.is_excluded(end)) {
        t.value = u.values[end];
    } else {
        auto at = [&](std::size_t d) {
            return (spec.side == Side::Left) ? u.values[n - d] : u.values[d];
        };
        t.value = 3.0 * at(1) - 3.0 * at(2) + at(3);
    }
    const double norm = frac_sobolev_norm(u, spec);
    t.norm_ratio = norm > 0.0 ? std::fabs(t.value) / norm : 0.0;
    return t;
}

PoincareResult poincare_ratio(const SampledFunction& u, double alpha, double p,
                              Direction dir) {
    PoincareResult r;
    r.c = calculus::ftfc_constant(u, alpha, dir);
    const Grid& g = u.grid;
    const std::size_t initial = (dir == Direction::Left) ? 0 : g.n;

    std::set<std::size_t> excl = u.excluded;
    excl.insert(initial);
    std::vector<double> diff(g.num_nodes(), 0.0);
    for (std::size_t i = 0; i <= g.n; ++i) {
        if (excl.count(i)) continue;
        const double d = (dir == Direction::Left) ? (g.node(i) - g.a) : (g.b - g.node(i));
        diff[i] = u.values[i] - r.c * std::pow(d, alpha - 1.0);
    }
    // Both norms over the interior, clear of the singular endpoints.
    const double lo = g.a + 0.05 * (g.b - g.a);
    const double hi = g.b - 0.05 * (g.b - g.a);
    r.numerator = lp_norm_window(SampledFunction(g, std::move(diff), excl), p, lo, hi);
    r.denominator = lp_norm_window(rl_derivative(u, alpha, dir).output, p, lo, hi);
    // Kernel elements give |D^alpha u| = 0 in the continuum; discretely the
    // quadrature leaves a small residue, so the guard compares against the
    // sample scale instead of an absolute 1e-12.
    if (r.denominator < std::max(1e-12, 1e-4 * lp_norm_window(u, p, lo, hi))) {
        r.kernel_element = true;
        r.ratio = 0.0;
        return r;
    }
    r.ratio = r.numerator / r.denominator;
    return r;
}

ConjugateScalingResult sobolev_conjugate_check(const SampledFunction& u, double alpha,
                                               double p) {
    if (!(alpha * p < 1.0))
        throw PreconditionError("alpha_p_ge_1",
                                "sobolev conjugate requires alpha*p < 1");
    if (max_abs(u) == 0.0)
        throw PreconditionError("zero_function", "nonzero sample required");
    check_truncation_safe(u);

    ConjugateScalingResult out;
    out.p_star = p / (1.0 - alpha * p);
    const Grid& g = u.grid;
    auto interp = [&](double x) -> double {
        const double pos = (x - g.a) / g.spacing();
        if (pos <= 0.0 || pos >= static_cast<double>(g.n)) return 0.0;
        const auto j = static_cast<std::size_t>(pos);
        const double w = pos - static_cast<double>(j);
        return (1.0 - w) * u.values[j] + w * u.values[j + 1];
    };
    for (double lambda : {0.5, 1.0, 2.0}) {
        SampledFunction ul = sample(g, [&](double x) { return interp(lambda * x); });
        const SampledFunction dul = rl_derivative(ul, alpha, Direction::Left).output;
        out.ratios.push_back(lp_norm(ul, out.p_star) / lp_norm(dul, p));
    }
    const double base = out.ratios[1];
    for (double r : out.ratios)
        out.max_deviation = std::max(out.max_deviation, std::fabs(r / base - 1.0));
    return out;
}

std::vector<double> pollution_tail(const SampledFunction& phi, double alpha, Direction dir,
                                   const std::vector<double>& x_eval) {
    if (!phi.excluded.empty())
        throw PreconditionError("excluded_nodes_unsupported",
                                "pollution_tail requires samples everywhere");
    const Grid& g = phi.grid;
    const double h = g.spacing();
    // Support bounds from the samples.
    std::size_t lo = g.n, hi = 0;
    for (std::size_t i = 0; i <= g.n; ++i) {
        if (phi.values[i] != 0.0) {
            lo = std::min(lo, i);
            hi = std::max(hi, i);
        }
    }
    if (lo > hi)
        return std::vector<double>(x_eval.size(), 0.0);  // zero function: zero tail

    const double coeff = -alpha * reciprocal_gamma(1.0 - alpha);
    std::vector<double> out;
    out.reserve(x_eval.size());
    for (double x : x_eval) {
        if (dir == Direction::Left && !(x > g.node(hi)))
            throw PreconditionError("x_inside_support",
                                    "left tail is defined beyond the support only");
        if (dir == Direction::Right && !(x < g.node(lo)))
            throw PreconditionError("x_inside_support",
                                    "right tail is defined before the support only");
        KahanSum acc;
        for (std::size_t i = lo; i <= hi; ++i) {
            const double w = (i == lo || i == hi) ? 0.5 * h : h;
            const double dist = (dir == Direction::Left) ? (x - g.node(i)) : (g.node(i) - x);
            acc.add(w * phi.values[i] * std::pow(dist, -1.0 - alpha));
        }
        out.push_back(coeff * acc.value());
    }
    return out;
}

ExtensionResult trivial_extension(const SampledFunction& u, double alpha, double p,
                                  double enlargement) {
    if (!(enlargement > 0.0))
        throw PreconditionError("enlargement", "enlargement must be positive");
    const Grid& g = u.grid;
    const double umax = max_abs(u);
    const std::size_t edge = std::max<std::size_t>(1, g.n / 20);
    for (std::size_t i = 0; i <= g.n; ++i) {
        if (i > edge && i + edge < g.n) continue;
        if (!u.is_excluded(i) && std::fabs(u.values[i]) > 1e-10 * umax)
            throw PreconditionError("support_not_compact",
                                    "trivial_extension requires u to vanish on the outer "
                                    "5% of nodes");
    }
    const double h = g.spacing();
    const auto cells = static_cast<std::size_t>(std::ceil(enlargement / h));
    const Grid big = make_uniform_grid(g.a - static_cast<double>(cells) * h,
                                       g.b + static_cast<double>(cells) * h,
                                       g.n + 2 * cells, g.kind);
    std::vector<double> vals(big.num_nodes(), 0.0);
    for (std::size_t i = 0; i <= g.n; ++i) vals[cells + i] = u.values[i];

    ExtensionResult r;
    r.extended = SampledFunction(big, std::move(vals));
    if (umax == 0.0) {
        r.norm_ratio = 1.0;
        return r;
    }
    const SobolevSpec spec{alpha, p, Side::Left};
    r.norm_ratio = frac_sobolev_norm(r.extended, spec) / frac_sobolev_norm(u, spec);
    return r;
}

ExtensionResult exterior_extension(const SampledFunction& u, double alpha, double p,
                                   double mu) {
    if (!(alpha * p < 1.0))
        throw PreconditionError("alpha_p_ge_1",
                                "exterior extension requires alpha*p < 1");
    if (!(mu > p / (1.0 - alpha * p)))
        throw PreconditionError("mu_too_small",
                                "exterior extension requires mu > p/(1 - alpha p)");
    const double lmu_norm = lp_norm(u, mu);
    if (!std::isfinite(lmu_norm))
        throw PreconditionError("lmu_norm", "L^mu norm of u must be finite");
    if (!u.excluded.empty())
        throw PreconditionError("excluded_nodes_unsupported",
                                "exterior_extension requires samples everywhere");

    const Grid& g = u.grid;
    const double per = g.b - g.a;
    const Grid big = make_uniform_grid(g.a - per, g.b + per, 3 * g.n, g.kind);
    auto cutoff = [&](double x) -> double {
        if (x >= g.a && x <= g.b) return 1.0;
        const double t = (x < g.a) ? (g.a - x) / (0.75 * per) : (x - g.b) / (0.75 * per);
        if (t >= 1.0) return 0.0;
        return std::exp(1.0 - 1.0 / (1.0 - t * t));
    };
    std::vector<double> vals(big.num_nodes(), 0.0);
    for (std::size_t i = 0; i <= big.n; ++i) {
        double base = 0.0;
        if (i >= g.n && i <= 2 * g.n) {
            base = u.values[i - g.n];
        } else if (i > 2 * g.n) {
            base = u.values[i - 2 * g.n];  // periodic copy on (b, b+per)
        }
        vals[i] = base * cutoff(big.node(i));
    }
    ExtensionResult r;
    r.extended = SampledFunction(big, std::move(vals));
    const SobolevSpec spec{alpha, p, Side::Left};
    const double orig = frac_sobolev_norm(u, spec);
    r.norm_ratio = orig > 0.0 ? frac_sobolev_norm(r.extended, spec) / orig : 1.0;
    return r;
}

double holder_quotient(const SampledFunction& u, double alpha, double p) {
    if (!(alpha * p > 1.0))
        throw PreconditionError("alpha_p_le_1", "Holder quotient requires alpha*p > 1");
    const double expo = alpha - 1.0 / p;
    const double h = u.grid.spacing();
    double worst = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u.is_excluded(i)) continue;
        for (std::size_t j = i + 4; j < u.size(); ++j) {
            if (u.is_excluded(j)) continue;
            const double q = std::fabs(u.values[i] - u.values[j]) /
                             std::pow(static_cast<double>(j - i) * h, expo);
            worst = std::max(worst, q);
        }
    }
    return worst;
}

}  // namespace sobolev
}  // namespace fracalc
