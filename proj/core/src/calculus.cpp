#include "fracalc/calculus.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <json.hpp>

#include "fracalc/norms.hpp"
#include "fracalc/special.hpp"

namespace fracalc {
namespace calculus {

namespace {

void require_regular(const SampledFunction& f, const char* who) {
    if (!f.excluded.empty())
        throw PreconditionError("excluded_nodes_unsupported",
                                std::string(who) + " requires samples at every node");
}

double max_abs(const SampledFunction& f) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (!f.is_excluded(i)) m = std::max(m, std::fabs(f.values[i]));
    return m;
}

// Solves the 3x3 system sum_j M[i][j] c[j] = rhs[i] by elimination.
std::array<double, 3> solve3(std::array<std::array<double, 3>, 3> M,
                             std::array<double, 3> rhs) {
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::fabs(M[r][col]) > std::fabs(M[piv][col])) piv = r;
        std::swap(M[piv], M[col]);
        std::swap(rhs[piv], rhs[col]);
        if (M[col][col] == 0.0)
            throw PreconditionError("unstable_extrapolation", "singular extrapolation system");
        for (int r = col + 1; r < 3; ++r) {
            const double fac = M[r][col] / M[col][col];
            for (int c = col; c < 3; ++c) M[r][c] -= fac * M[col][c];
            rhs[r] -= fac * rhs[col];
        }
    }
    std::array<double, 3> x{};
    for (int r = 2; r >= 0; --r) {
        double s = rhs[r];
        for (int c = r + 1; c < 3; ++c) s -= M[r][c] * x[c];
        x[r] = s / M[r][r];
    }
    return x;
}

}  // namespace

ResidualReport make_report(std::string name, double residual, double tolerance,
                           std::map<std::string, double> diagnostics) {
    ResidualReport r;
    r.identity_name = std::move(name);
    r.residual_norm = residual;
    r.tolerance = tolerance;
    r.pass = residual <= tolerance;
    r.diagnostics = std::move(diagnostics);
    return r;
}

std::string report_to_json(const ResidualReport& r) {
    nlohmann::json j{{"identity", r.identity_name},
                     {"residual", r.residual_norm},
                     {"tolerance", r.tolerance},
                     {"pass", r.pass}};
    j["diagnostics"] = r.diagnostics;
    return j.dump(2) + "\n";
}

double smooth_bump(double x, double center, double halfwidth) {
    const double t = (x - center) / halfwidth;
    if (!(std::fabs(t) < 1.0)) return 0.0;
    return std::exp(-1.0 / (1.0 - t * t));
}

double relative_l2_interior(const SampledFunction& approx, const SampledFunction& exact,
                            double trim) {
    if (!(approx.grid == exact.grid))
        throw PreconditionError("grid_mismatch", "residual requires matching grids");
    const Grid& g = approx.grid;
    const double lo = g.a + trim * (g.b - g.a);
    const double hi = g.b - trim * (g.b - g.a);
    KahanSum num, den;
    for (std::size_t i = 0; i <= g.n; ++i) {
        const double x = g.node(i);
        if (x < lo || x > hi) continue;
        if (approx.is_excluded(i) || exact.is_excluded(i)) continue;
        const double d = approx.values[i] - exact.values[i];
        num.add(d * d);
        den.add(exact.values[i] * exact.values[i]);
    }
    const double nv = std::sqrt(num.value());
    const double dv = std::sqrt(den.value());
    return dv > 1e-300 ? nv / dv : nv;
}

double ftfc_constant(const SampledFunction& f, double alpha, Direction dir) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw PreconditionError("alpha_range", "ftfc_constant requires 0<alpha<1");
    const SampledFunction g = rl_integral(f, 1.0 - alpha, dir).output;
    const std::size_t n = g.grid.n;
    if (n < 4) throw PreconditionError("grid_too_small", "need at least 4 intervals");
    const double h = g.grid.spacing();
    auto val = [&](std::size_t d) {
        return (dir == Direction::Left) ? g.values[d] : g.values[n - d];
    };
    const double e1 = val(1), e2 = val(2), e3 = val(3);
    const double s = 1.0 - alpha;
    const double d1 = h, d2 = 2.0 * h, d3 = 3.0 * h;

    // Two-term fit {1, d^s}.
    const double den2 = std::pow(d2, s) - std::pow(d1, s);
    const double c2 = (e1 * std::pow(d2, s) - e2 * std::pow(d1, s)) / den2;
    // Three-term fit {1, d^s, d}: the boundary expansion of I^(1-alpha)
    // for inputs of the form c*kappa + (absolutely continuous part).
    const auto sol = solve3({{{1.0, std::pow(d1, s), d1},
                              {1.0, std::pow(d2, s), d2},
                              {1.0, std::pow(d3, s), d3}}},
                            {e1, e2, e3});
    const double c3 = sol[0];

    // Settled when the two estimates agree to 1e-3 of the settled value;
    // fractional boundary layers d^(mu+1-alpha) outside the basis leave an
    // O(h^..) haze around zero, so the gate carries a data-scale floor.
    const double threshold = 1e-3 * std::fabs(c3) + 1e-2 * max_abs(g);
    if (std::fabs(c3 - c2) > threshold)
        throw PreconditionError("unstable_extrapolation",
                                "endpoint extrapolation of I^(1-alpha) f did not settle");
    return c3 * reciprocal_gamma(alpha);
}

FtfcDecomposition ftfc_reconstruct(const SampledFunction& f, double alpha, Direction dir) {
    FtfcDecomposition out;
    const Grid& grid = f.grid;
    const std::size_t initial = (dir == Direction::Left) ? 0 : grid.n;

    if (grid.kind == DomainKind::TruncatedLine) {
        out.c = 0.0;  // kernel functions vanish at infinity; FTFC on R has no c term
        out.kernel_part = SampledFunction(grid, std::vector<double>(grid.num_nodes(), 0.0));
    } else {
        out.c = ftfc_constant(f, alpha, dir);
        std::set<std::size_t> excl{initial};
        out.kernel_part = sample(
            grid,
            [&](double x) {
                const double d = (dir == Direction::Left) ? (x - grid.a) : (grid.b - x);
                return out.c * std::pow(d, alpha - 1.0);
            },
            excl);
    }

    const OperatorResult d = rl_derivative(f, alpha, dir);
    out.integral_part = rl_integral(d.output, alpha, dir).output;

    SampledFunction recon = out.integral_part;
    for (std::size_t i : out.kernel_part.excluded) recon.excluded.insert(i);
    for (std::size_t i = 0; i < recon.size(); ++i)
        if (!recon.is_excluded(i)) recon.values[i] += out.kernel_part.values[i];
    out.residual_rel = relative_l2_interior(recon, f);
    return out;
}

namespace {

// Samples psi and its first m+1 derivatives on the grid; analytic where
// provided, stencil of the previous order otherwise.
std::vector<std::vector<double>> sample_derivatives(const Grid& g, const SmoothFn& psi,
                                                    unsigned order) {
    std::vector<std::vector<double>> out(order + 1);
    out[0].resize(g.num_nodes());
    for (std::size_t i = 0; i <= g.n; ++i) out[0][i] = psi.value(g.node(i));
    for (unsigned k = 1; k <= order; ++k) {
        out[k].resize(g.num_nodes());
        if (psi.derivs.size() >= k && psi.derivs[k - 1]) {
            for (std::size_t i = 0; i <= g.n; ++i) out[k][i] = psi.derivs[k - 1](g.node(i));
        } else {
            SampledFunction prev(g, out[k - 1]);
            out[k] = stencil_derivative(prev).values;
        }
    }
    return out;
}

// Remainder R_m(f, psi)(x_i), in the form that closes the identity
//   D^a(f psi) = sum_k (+-1)^k C_k I^(k-a) f psi^(k)(x) + R_m:
//   R_m(x) = 1/Gamma(-alpha) * int f(y) T(y) |x-y|^(-1-alpha) dy,
// where T is the order-m Taylor defect of psi(y) expanded about the
// evaluation point x. (Expanding about y instead closes the identity only
// for polynomial psi of degree <= m+1.) The outer integral uses the product
// quadrature on f*T/|x-y|^(m+1) against the regularized kernel.
double remainder_at(const Grid& grid, const std::vector<double>& fvals,
                    const std::vector<std::vector<double>>& psi, unsigned m, double alpha,
                    Direction dir, std::size_t i, std::vector<double>& scratch) {
    const std::size_t n = grid.n;
    const double h = grid.spacing();
    double factk = 1.0;
    std::vector<double> inv_fact(m + 1);
    for (unsigned k = 0; k <= m; ++k) {
        if (k > 0) factk *= static_cast<double>(k);
        inv_fact[k] = 1.0 / factk;
    }
    const double sgn_step = (dir == Direction::Left) ? -1.0 : 1.0;  // sign of y - x
    // limit of T/|x-y|^(m+1) as y -> x
    double diag = psi[m + 1][i] / (factk * static_cast<double>(m + 1));
    if (dir == Direction::Left && m % 2 == 0) diag = -diag;  // (y-x)^(m+1) sign

    scratch.assign(n + 1, 0.0);
    const std::size_t lo = (dir == Direction::Left) ? 0 : i;
    const std::size_t hi = (dir == Direction::Left) ? i : n;
    for (std::size_t j = lo; j <= hi; ++j) {
        if (j == i) {
            scratch[j] = fvals[j] * diag;
            continue;
        }
        const double delta =
            std::fabs(static_cast<double>(i) - static_cast<double>(j)) * h;
        double acc = psi[0][j];  // psi(y) - sum_k psi^(k)(x) (y-x)^k / k!
        double dp = 1.0;
        for (unsigned k = 0; k <= m; ++k) {
            acc -= psi[k][i] * dp * inv_fact[k];
            dp *= sgn_step * delta;
        }
        scratch[j] = fvals[j] * acc / std::pow(delta, static_cast<double>(m + 1));
    }
    const double kq = kernel_quadrature_at(grid, scratch, static_cast<double>(m) + 1.0 - alpha,
                                           dir, i);
    return reciprocal_gamma(-alpha) * kq;
}

ResidualReport rule_residual(const std::string& name, const SampledFunction& lhs,
                             const SampledFunction& rhs, double tolerance,
                             std::map<std::string, double> diagnostics) {
    const double lhs_norm = std::max(max_abs(lhs), 1e-300);
    SampledFunction scaled_rhs = rhs;
    double abs_res = relative_l2_interior(scaled_rhs, lhs, 0.05);
    // relative_l2_interior already normalizes by |lhs|_L2; keep the max norm
    // in the diagnostics for scale context.
    diagnostics["lhs_max"] = lhs_norm;
    return make_report(name, abs_res, tolerance, std::move(diagnostics));
}

}  // namespace

ResidualReport product_rule_check(const SampledFunction& f, const SmoothFn& psi,
                                  double alpha, Direction dir, unsigned m,
                                  double tolerance) {
    require_regular(f, "product_rule_check");
    if (m > 4)
        throw PreconditionError("product_rule_order", "m > 4 not supported");
    const Grid& grid = f.grid;
    const auto psi_s = sample_derivatives(grid, psi, m + 1);

    std::vector<double> fpsi(grid.num_nodes());
    for (std::size_t i = 0; i <= grid.n; ++i) fpsi[i] = f.values[i] * psi_s[0][i];
    const SampledFunction lhs =
        rl_derivative(SampledFunction(grid, fpsi), alpha, dir).output;

    const SampledFunction df = rl_derivative(f, alpha, dir).output;
    std::vector<double> rhs(grid.num_nodes(), 0.0);
    for (std::size_t i = 0; i <= grid.n; ++i) rhs[i] = psi_s[0][i] * df.values[i];

    for (unsigned k = 1; k <= m; ++k) {
        const double sig = static_cast<double>(k) - alpha;
        std::vector<double> ik = kernel_quadrature(grid, f.values, sig, dir, false);
        // Right-direction reflection flips odd psi-derivatives: (-1)^k C_k.
        const double flip = (dir == Direction::Right && k % 2 == 1) ? -1.0 : 1.0;
        const double ck = flip * gamma(1.0 + alpha) *
                          reciprocal_gamma(static_cast<double>(k) + 1.0) *
                          reciprocal_gamma(1.0 - static_cast<double>(k) + alpha) *
                          reciprocal_gamma(sig);
        for (std::size_t i = 0; i <= grid.n; ++i) rhs[i] += ck * ik[i] * psi_s[k][i];
    }

    std::vector<double> scratch;
    for (std::size_t i = 0; i <= grid.n; ++i) {
        if (lhs.is_excluded(i)) continue;
        rhs[i] += remainder_at(grid, f.values, psi_s, m, alpha, dir, i, scratch);
    }

    SampledFunction rhs_fn(grid, std::move(rhs), lhs.excluded);
    return rule_residual("product-rule[m=" + std::to_string(m) + "]", lhs, rhs_fn, tolerance,
                         {{"alpha", alpha}, {"m", static_cast<double>(m)}});
}

ResidualReport chain_rule_check(const SampledFunction& f,
                                const std::function<double(double)>& phi,
                                const std::function<double(double)>& phi_prime,
                                double alpha, Direction dir, double tolerance) {
    require_regular(f, "chain_rule_check");
    const Grid& grid = f.grid;
    const double fmax = max_abs(f);
    const double zero_tol = 1e-12 * std::max(fmax, 1.0);
    const double ratio_at_zero = phi_prime(0.0);

    std::vector<double> phif(grid.num_nodes()), ratio(grid.num_nodes());
    double limit_nodes = 0.0;
    for (std::size_t i = 0; i <= grid.n; ++i) {
        const double fi = f.values[i];
        phif[i] = phi(fi);
        if (std::fabs(fi) <= zero_tol) {
            ratio[i] = ratio_at_zero;
            limit_nodes += 1.0;
        } else {
            ratio[i] = phif[i] / fi;
        }
    }

    const SampledFunction lhs =
        rl_derivative(SampledFunction(grid, phif), alpha, dir).output;
    const SampledFunction df = rl_derivative(f, alpha, dir).output;

    // R_0(f, ratio) with the ratio's derivative (for the diagonal) taken
    // from the samples.
    SampledFunction ratio_fn(grid, ratio);
    const std::vector<double> ratio_prime = stencil_derivative(ratio_fn).values;
    std::vector<std::vector<double>> g_samples{ratio, ratio_prime};

    std::vector<double> rhs(grid.num_nodes(), 0.0), scratch;
    for (std::size_t i = 0; i <= grid.n; ++i) {
        if (lhs.is_excluded(i)) continue;
        rhs[i] = ratio[i] * df.values[i] +
                 remainder_at(grid, f.values, g_samples, 0, alpha, dir, i, scratch);
    }
    SampledFunction rhs_fn(grid, std::move(rhs), lhs.excluded);
    return rule_residual("chain-rule", lhs, rhs_fn, tolerance,
                         {{"alpha", alpha}, {"limit_nodes", limit_nodes}});
}

ResidualReport ibp_residual(const SampledFunction& f, const SampledFunction& g,
                            double alpha, double tolerance) {
    require_regular(f, "ibp_residual");
    require_regular(g, "ibp_residual");
    const double scale =
        std::max(lp_norm(f, 2.0) * lp_norm(g, 2.0), 1e-300);

    const SampledFunction dg = rl_derivative(g, alpha, Direction::Right).output;
    const SampledFunction df = rl_derivative(f, alpha, Direction::Left).output;
    const double lhs_d = inner_product(f, dg);
    const double rhs_d = inner_product(df, g);
    const double res_d = std::fabs(lhs_d - rhs_d) / scale;

    const SampledFunction ig = rl_integral(g, alpha, Direction::Left).output;
    const SampledFunction if_ = rl_integral(f, alpha, Direction::Right).output;
    const double lhs_i = inner_product(f, ig);
    const double rhs_i = inner_product(if_, g);
    const double res_i = std::fabs(lhs_i - rhs_i) / scale;

    return make_report("integration-by-parts", std::max(res_d, res_i), tolerance,
                       {{"alpha", alpha},
                        {"derivative_form_residual", res_d},
                        {"integral_form_residual", res_i},
                        {"scale", scale}});
}

namespace {

struct BatteryMember {
    double center = 0.0;
    double halfwidth = 0.0;
};

// Mass of model(x)*phi(x) over one cell whose `anchor` end carries a masked
// (possibly singular) sample. The model c*s^gamma (s = distance from the
// anchor) is fitted through the two samples nearest the anchor on the open
// side; non-fittable data falls back to the linear extension. gamma < 0 is
// handled by the power substitution.
template <typename Phi>
double masked_cell_mass(double anchor, double into, double h, double f1, double f2,
                        const Phi& phi) {
    const auto& gauss = gauss_legendre_01(16);
    const double dir = (into > anchor) ? 1.0 : -1.0;
    bool power_ok = f1 * f2 > 0.0;
    double g = 0.0;
    if (power_ok) {
        g = std::log(std::fabs(f2 / f1)) / std::log(2.0);
        power_ok = std::isfinite(g) && g > -0.999 && g <= 8.0;
    }
    KahanSum acc;
    if (power_ok) {
        const double c = f1 / std::pow(h, g);
        const double expo = 1.0 / (g + 1.0);
        for (std::size_t q = 0; q < gauss.nodes.size(); ++q) {
            const double s = h * std::pow(gauss.nodes[q], expo);
            acc.add(gauss.weights[q] * phi(anchor + dir * s));
        }
        return c * std::pow(h, g + 1.0) / (g + 1.0) * acc.value();
    }
    for (std::size_t q = 0; q < gauss.nodes.size(); ++q) {
        const double s = h * gauss.nodes[q];
        const double v = f1 + (f1 - f2) * (1.0 - s / h);  // linear through (h,f1),(2h,f2)
        acc.add(gauss.weights[q] * v * phi(anchor + dir * s));
    }
    return h * acc.value();
}

std::vector<BatteryMember> make_battery(const Grid& g, std::size_t battery_size) {
    const double len = g.b - g.a;
    const double h = g.spacing();
    std::vector<BatteryMember> battery;
    for (std::size_t j = 0; j < battery_size; ++j) {
        const double c = g.a + (static_cast<double>(j) + 1.0) * len /
                                   (static_cast<double>(battery_size) + 1.0);
        for (double w : {0.1 * len, 0.2 * len, 0.4 * len}) {
            double hw = 0.5 * w;
            const double room = std::min(c - g.a, g.b - c) - 2.0 * h;
            hw = std::min(hw, room);
            if (hw < 4.0 * h) continue;  // unresolvable on this grid
            battery.push_back({c, hw});
        }
    }
    if (battery.empty())
        throw PreconditionError("battery_empty",
                                "no test bump fits strictly inside the domain");
    return battery;
}

}  // namespace

ResidualReport weak_derivative_verify(const SampledFunction& u,
                                      const SampledFunction& v_candidate, double alpha,
                                      Direction dir, std::size_t battery_size,
                                      double tolerance) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw PreconditionError("alpha_range", "weak_derivative_verify requires 0<alpha<1");
    if (!(u.grid == v_candidate.grid))
        throw PreconditionError("grid_mismatch", "u and v must share a grid");
    const Grid& g = u.grid;
    const std::size_t n = g.n;
    const double h = g.spacing();
    const double len = g.b - g.a;
    const bool on_line = g.kind == DomainKind::TruncatedLine;
    const Direction opp = (dir == Direction::Left) ? Direction::Right : Direction::Left;

    // Enlarged grid, one domain length per side, same spacing.
    const Grid big = make_uniform_grid(g.a - len, g.b + len, 3 * n, DomainKind::FiniteInterval);

    const double u_norm = lp_norm(u, 2.0);
    const double v_norm = lp_norm(v_candidate, 2.0);

    double worst = 0.0, worst_abs = 0.0, worst_center = 0.0;
    const auto battery = make_battery(g, battery_size);
    for (const auto& member : battery) {
        SampledFunction phi_big =
            sample(big, [&](double x) { return smooth_bump(x, member.center, member.halfwidth); });
        const SampledFunction dphi = rl_derivative(phi_big, alpha, opp).output;

        // LHS: integral of v * phi over the original window, cell by cell;
        // cells adjacent to an excluded (singular) node of v are integrated
        // against the one-sided power model fitted to the nearest samples.
        auto phi = [&](double x) { return smooth_bump(x, member.center, member.halfwidth); };
        KahanSum lhs;
        for (std::size_t c = 0; c < n; ++c) {
            const bool left_ok = !v_candidate.is_excluded(c);
            const bool right_ok = !v_candidate.is_excluded(c + 1);
            if (left_ok && right_ok) {
                lhs.add(0.5 * h *
                        (v_candidate.values[c] * phi(g.node(c)) +
                         v_candidate.values[c + 1] * phi(g.node(c + 1))));
            } else if (!left_ok && right_ok && c + 2 <= n && !v_candidate.is_excluded(c + 2)) {
                lhs.add(masked_cell_mass(g.node(c), g.node(c + 1), h,
                                         v_candidate.values[c + 1],
                                         v_candidate.values[c + 2], phi));
            } else if (left_ok && !right_ok && c >= 1 && !v_candidate.is_excluded(c - 1)) {
                lhs.add(masked_cell_mass(g.node(c + 1), g.node(c), h, v_candidate.values[c],
                                         v_candidate.values[c - 1], phi));
            }
        }

        // RHS: (-1)^[alpha] * integral of u * D^alpha_opp(phi~). For finite
        // domains only the restriction to (a,b) enters; for the truncated
        // line the whole enlarged window enters with u continued by its
        // edge values, plus the closed-form far-tail mass.
        KahanSum rhs;
        double dphi_win_sq = 0.0;
        for (std::size_t i = 0; i <= n; ++i) {
            const std::size_t ib = n + i;
            if (u.is_excluded(i) || dphi.is_excluded(ib)) continue;
            const double w = (i == 0 || i == n) ? 0.5 * h : h;
            rhs.add(w * u.values[i] * dphi.values[ib]);
            dphi_win_sq += w * dphi.values[ib] * dphi.values[ib];
        }
        if (on_line) {
            for (std::size_t ib = 0; ib <= 3 * n; ++ib) {
                if (ib >= n && ib <= 2 * n) continue;
                if (dphi.is_excluded(ib)) continue;
                const double uval = (ib < n) ? u.values[0] : u.values[n];
                const double w = (ib == 0 || ib == 3 * n) ? 0.5 * h : h;
                rhs.add(w * uval * dphi.values[ib]);
            }
            // Far-tail closure: the polluted side of D^alpha_opp(phi~) decays
            // like |x|^(-1-alpha); its remaining integral equals
            // -I^(1-alpha)_opp(phi~) at the window edge.
            KahanSum tail_int;
            for (std::size_t i = 0; i <= n; ++i) {
                const double x = g.node(i);
                const double pv = smooth_bump(x, member.center, member.halfwidth);
                if (pv == 0.0) continue;
                const double w = (i == 0 || i == n) ? 0.5 * h : h;
                const double dist = (dir == Direction::Left) ? (x - big.a) : (big.b - x);
                tail_int.add(w * pv * std::pow(dist, -alpha));
            }
            const double edge_u = (dir == Direction::Left) ? u.values[0] : u.values[n];
            rhs.add(-edge_u * reciprocal_gamma(1.0 - alpha) * tail_int.value());
        }

        // Each side is compared against the pairing magnitude itself; the
        // Cauchy-Schwarz floor keeps genuinely-zero pairings (u constant on
        // the line) from dividing by zero without hiding injected noise.
        const double phi_norm = std::sqrt(member.halfwidth);  // order of |phi|_L2
        const double floor_scale =
            0.05 * (u_norm * std::sqrt(dphi_win_sq) + v_norm * phi_norm);
        const double scale = std::max(
            {std::fabs(lhs.value()), std::fabs(rhs.value()), floor_scale, 1e-300});
        const double res = std::fabs(lhs.value() - rhs.value());
        if (res / scale > worst) {
            worst = res / scale;
            worst_abs = res;
            worst_center = member.center;
        }
    }

    return make_report("weak-derivative[" + to_string(dir) + "]", worst, tolerance,
                       {{"alpha", alpha},
                        {"battery", static_cast<double>(battery.size())},
                        {"max_abs_residual", worst_abs},
                        {"worst_center", worst_center}});
}

SampledFunction mollify(const SampledFunction& f, double epsilon) {
    const double h = f.grid.spacing();
    if (!(epsilon >= 2.0 * h))
        throw PreconditionError("mollifier_support",
                                "mollify requires epsilon >= 2h (at least two cells)");
    const std::size_t n = f.grid.n;
    const auto radius = static_cast<std::ptrdiff_t>(std::floor(epsilon / h));
    std::vector<double> kernel;
    KahanSum mass;
    for (std::ptrdiff_t off = -radius; off <= radius; ++off) {
        const double t = static_cast<double>(off) * h / epsilon;
        const double v = (std::fabs(t) < 1.0) ? std::exp(-1.0 / (1.0 - t * t)) : 0.0;
        kernel.push_back(v);
        mass.add(v * h);
    }
    for (double& v : kernel) v /= mass.value();  // discrete unit mass, exactly

    std::vector<double> out(n + 1, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
        KahanSum acc;
        for (std::ptrdiff_t off = -radius; off <= radius; ++off) {
            const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i) - off;
            if (j < 0 || j > static_cast<std::ptrdiff_t>(n)) continue;  // zero extension
            const auto ju = static_cast<std::size_t>(j);
            if (f.is_excluded(ju)) continue;  // masked endpoints count as zero
            acc.add(kernel[static_cast<std::size_t>(off + radius)] * f.values[ju]);
        }
        out[i] = h * acc.value();
    }
    return SampledFunction(f.grid, std::move(out));
}

}  // namespace calculus
}  // namespace fracalc
