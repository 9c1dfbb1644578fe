#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "cli.hpp"
#include "fracalc/calculus.hpp"
#include "fracalc/norms.hpp"
#include "fracalc/oracle.hpp"
#include "fracalc/serialize.hpp"
#include "fracalc/sobolev.hpp"
#include "fracalc/special.hpp"

namespace fracalc {
namespace cli {

namespace {

constexpr int kExitPass = 0;
constexpr int kExitIdentityFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitPreconditionError = 3;

nlohmann::json domain_json(const RunConfig& c) {
    return {{"a", c.a},
            {"b", c.b},
            {"n", c.n},
            {"kind", c.kind == DomainKind::TruncatedLine ? "truncated-line"
                                                         : "finite-interval"}};
}

}  // namespace

nlohmann::json RunConfig::to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["function"] = function.to_json();
    j["op"] = op;
    j["alpha"] = alpha;
    j["p"] = sigma_p;
    j["direction"] = to_string(direction);
    j["domain"] = domain_json(*this);
    j["suite"] = suite;
    j["ladder"] = ladder;
    j["output"] = output;
    j["format"] = format;
    j["norm"] = norm_kind;
    j["seed"] = seed;
    j["threads"] = threads;
    j["tolerances"] = tolerances;
    return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    RunConfig c;
    try {
        if (j.contains("command")) c.command = j.at("command").get<std::string>();
        if (j.contains("function")) c.function = FunctionSpec::from_json(j.at("function"));
        if (j.contains("op")) c.op = j.at("op").get<std::string>();
        if (j.contains("alpha")) c.alpha = j.at("alpha").get<double>();
        if (j.contains("p")) c.sigma_p = j.at("p").get<double>();
        if (j.contains("direction"))
            c.direction = j.at("direction").get<std::string>() == "right" ? Direction::Right
                                                                          : Direction::Left;
        if (j.contains("domain")) {
            const auto& d = j.at("domain");
            c.a = d.at("a").get<double>();
            c.b = d.at("b").get<double>();
            c.n = d.at("n").get<std::size_t>();
            c.kind = d.value("kind", "finite-interval") == "truncated-line"
                         ? DomainKind::TruncatedLine
                         : DomainKind::FiniteInterval;
        }
        if (j.contains("suite")) c.suite = j.at("suite").get<std::string>();
        if (j.contains("ladder")) c.ladder = j.at("ladder").get<std::vector<std::size_t>>();
        if (j.contains("output")) c.output = j.at("output").get<std::string>();
        if (j.contains("format")) c.format = j.at("format").get<std::string>();
        if (j.contains("norm")) c.norm_kind = j.at("norm").get<std::string>();
        if (j.contains("seed")) c.seed = j.at("seed").get<unsigned long long>();
        if (j.contains("threads")) c.threads = j.at("threads").get<int>();
        if (j.contains("tolerances")) c.tolerances = j.at("tolerances");
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad config: ") + e.what());
    }
    return c;
}

namespace {

Grid make_grid(const RunConfig& cfg) { return make_uniform_grid(cfg.a, cfg.b, cfg.n, cfg.kind); }

OperatorResult run_operator(const RunConfig& cfg, const SampledFunction& f) {
    if (cfg.op == "rl-int") return rl_integral(f, cfg.alpha, cfg.direction);
    if (cfg.op == "rl-deriv")
        return apply(f, {cfg.alpha, cfg.direction, Family::RiemannLiouville});
    if (cfg.op == "caputo") return apply(f, {cfg.alpha, cfg.direction, Family::Caputo});
    if (cfg.op == "weak-caputo")
        return apply(f, {cfg.alpha, cfg.direction, Family::WeakCaputo});
    if (cfg.op == "gl") return apply(f, {cfg.alpha, cfg.direction, Family::GrunwaldLetnikov});
    if (cfg.op == "fourier") return apply(f, {cfg.alpha, cfg.direction, Family::Fourier});
    throw ConfigError("unknown op '" + cfg.op +
                      "' (rl-int|rl-deriv|caputo|weak-caputo|gl|fourier)");
}

double tolerance_for(const RunConfig& cfg, const std::string& key, double fallback) {
    if (cfg.tolerances.contains(key)) return cfg.tolerances.at(key).get<double>();
    return fallback;
}

}  // namespace

int cmd_compute(const RunConfig& cfg) {
    const Grid g = make_grid(cfg);
    const SampledFunction f = realize(cfg.function, g);
    const OperatorResult r = run_operator(cfg, f);
    const std::string out = cfg.output.empty() ? ("fracalc_compute." + cfg.format) : cfg.output;
    if (cfg.format == "json")
        write_file_atomic(out, to_json(r));
    else
        write_file_atomic(out, to_csv(r));
    std::cout << "wrote " << out << "\n";
    return kExitPass;
}

// ---------------------------------------------------------------------------
// verify suites
// ---------------------------------------------------------------------------

namespace {

using calculus::ResidualReport;
using calculus::smooth_bump;

struct SuiteRunner {
    const RunConfig& cfg;
    std::vector<ResidualReport> reports;

    void add(ResidualReport r) { reports.push_back(std::move(r)); }

    std::vector<double> alphas() const {
        if (cfg.tolerances.contains("alphas"))
            return cfg.tolerances.at("alphas").get<std::vector<double>>();
        return {0.25, 0.5, 0.75};
    }
};

SampledFunction bump_on(const Grid& g, double center_frac, double width_frac) {
    const double len = g.b - g.a;
    return sample(g, [&](double x) {
        return smooth_bump(x, g.a + center_frac * len, 0.5 * width_frac * len);
    });
}

void suite_ftfc(SuiteRunner& s) {
    const Grid g = make_grid(s.cfg);
    const double tol = tolerance_for(s.cfg, "ftfc", 1e-3);
    const SampledFunction f = bump_on(g, 0.5, 0.7);
    for (double alpha : s.alphas()) {
        const SampledFunction integ = rl_integral(f, alpha, Direction::Left).output;
        const SampledFunction round =
            rl_derivative(integ, alpha, Direction::Left).output;
        s.add(calculus::make_report("ftfc-derivative-of-integral[a=" + std::to_string(alpha) + "]",
                                    calculus::relative_l2_interior(round, f), tol,
                                    {{"alpha", alpha}}));
        const auto dec = calculus::ftfc_reconstruct(f, alpha, Direction::Left);
        s.add(calculus::make_report("ftfc-reconstruct[a=" + std::to_string(alpha) + "]",
                                    dec.residual_rel, tol, {{"alpha", alpha}, {"c", dec.c}}));
    }
    // kernel-function calibration: c(kappa) = 1
    for (double alpha : s.alphas()) {
        const SampledFunction kap =
            sample(g, [&](double x) { return std::pow(x - g.a, alpha - 1.0); }, {0});
        const double c = calculus::ftfc_constant(kap, alpha, Direction::Left);
        s.add(calculus::make_report("ftfc-kernel-constant[a=" + std::to_string(alpha) + "]",
                                    std::fabs(c - 1.0), tolerance_for(s.cfg, "ftfc_c", 1e-2),
                                    {{"alpha", alpha}, {"c", c}}));
    }
}

void suite_product(SuiteRunner& s) {
    const Grid g = make_grid(s.cfg);
    const double tol = tolerance_for(s.cfg, "product", 1e-3);
    const SampledFunction f = bump_on(g, 0.5, 0.7);
    calculus::SmoothFn one{[](double) { return 1.0; },
                           {[](double) { return 0.0; }, [](double) { return 0.0; }}};
    calculus::SmoothFn lin{[](double x) { return x; },
                           {[](double) { return 1.0; }, [](double) { return 0.0; },
                            [](double) { return 0.0; }}};
    const double c = g.a + 0.45 * (g.b - g.a), hw = 0.4 * (g.b - g.a);
    calculus::SmoothFn psib{[=](double x) { return smooth_bump(x, c, hw); }, {}};
    for (double alpha : s.alphas()) {
        auto r0 = calculus::product_rule_check(f, one, alpha, Direction::Left, 0, tol);
        r0.identity_name += "[psi=1,a=" + std::to_string(alpha) + "]";
        s.add(r0);
        auto r1 = calculus::product_rule_check(f, lin, alpha, Direction::Left, 1, tol);
        r1.identity_name += "[psi=x,a=" + std::to_string(alpha) + "]";
        s.add(r1);
        auto rb = calculus::product_rule_check(f, psib, alpha, Direction::Left, 0, tol);
        rb.identity_name += "[psi=bump,a=" + std::to_string(alpha) + "]";
        s.add(rb);
    }
}

void suite_chain(SuiteRunner& s) {
    const Grid g = make_grid(s.cfg);
    const double tol = tolerance_for(s.cfg, "chain", 1e-3);
    const SampledFunction f = bump_on(g, 0.5, 0.7);
    struct Case {
        const char* name;
        double (*phi)(double);
        double (*dphi)(double);
    };
    const Case cases[] = {
        {"id", [](double x) { return x; }, [](double) { return 1.0; }},
        {"square", [](double x) { return x * x; }, [](double x) { return 2.0 * x; }},
        {"cubic", [](double x) { return x * x * x - 2.0 * x; },
         [](double x) { return 3.0 * x * x - 2.0; }},
    };
    for (const auto& c : cases) {
        auto r = calculus::chain_rule_check(f, c.phi, c.dphi, s.cfg.alpha, Direction::Left, tol);
        r.identity_name += std::string("[phi=") + c.name + "]";
        s.add(r);
    }
}

void suite_ibp(SuiteRunner& s) {
    const Grid g = make_grid(s.cfg);
    const double tol = tolerance_for(s.cfg, "ibp", 1e-3);
    const SampledFunction f = sample(g, [&](double x) { return (x - g.a) * (x - g.a); });
    const SampledFunction gb = bump_on(g, 0.5, 0.6);
    for (double alpha : s.alphas()) {
        auto r = calculus::ibp_residual(f, gb, alpha, tol);
        r.identity_name += "[a=" + std::to_string(alpha) + "]";
        s.add(r);
    }
}

void suite_weak(SuiteRunner& s) {
    const double alpha = s.cfg.alpha;
    const double tol = tolerance_for(s.cfg, "weak", 0.02);
    const std::size_t battery = 5;

    // constant on a finite interval vs the RL formula
    const Grid g = make_grid(s.cfg);
    const SampledFunction u = sample(g, [](double) { return 1.0; });
    const SampledFunction v = sample(
        g,
        [&](double x) {
            return std::pow(x - g.a, -alpha) * reciprocal_gamma(1.0 - alpha);
        },
        {0});
    auto r = calculus::weak_derivative_verify(u, v, alpha, Direction::Left, battery, tol);
    r.identity_name += "[const/RL]";
    s.add(r);

    // step function on (-1,1) against the closed-form weak derivative
    const Grid gs = make_uniform_grid(-1.0, 1.0, g.n, DomainKind::FiniteInterval);
    const SampledFunction us =
        sample(gs, [](double x) { return x <= 0.0 ? 0.5 : 1.5; });
    const auto formula = oracle::step_weak_derivative(0.5, 1.5, alpha);
    const SampledFunction vs = sample(gs, formula, {0, gs.n / 2});
    auto rs = calculus::weak_derivative_verify(us, vs, alpha, Direction::Left, battery, tol);
    rs.identity_name += "[step]";
    s.add(rs);

    // constant on the truncated line pairs with zero
    const Grid gt = make_uniform_grid(-8.0, 8.0, g.n, DomainKind::TruncatedLine);
    const SampledFunction ut = sample(gt, [](double) { return 1.0; });
    const SampledFunction vt = sample(gt, [](double) { return 0.0; });
    auto rt = calculus::weak_derivative_verify(ut, vt, alpha, Direction::Left, battery, tol);
    rt.identity_name += "[const-on-line]";
    s.add(rt);

    // rejection check: 10% multiplicative noise must fail. The report's
    // residual is tol/noisy so that pass keeps meaning residual<=tolerance.
    SampledFunction vn = v;
    for (double& x : vn.values) x *= 1.1;
    auto rn = calculus::weak_derivative_verify(u, vn, alpha, Direction::Left, battery, tol);
    s.add(calculus::make_report("weak-rejects-noise[const/RL]",
                                tol / std::max(rn.residual_norm, 1e-300), 1.0,
                                {{"noisy_residual", rn.residual_norm}}));
}

void suite_mollify(SuiteRunner& s) {
    const double tol = tolerance_for(s.cfg, "mollify", 1e-3);
    const Grid g = make_uniform_grid(-8.0, 8.0, std::max<std::size_t>(s.cfg.n, 512),
                                     DomainKind::TruncatedLine);
    const SampledFunction f = sample(g, [](double x) { return smooth_bump(x, 0.0, 2.0); });
    const double eps = 0.1;
    const SampledFunction fe = calculus::mollify(f, eps);
    const SampledFunction d_fe = rl_derivative(fe, s.cfg.alpha, Direction::Left).output;
    const SampledFunction df = rl_derivative(f, s.cfg.alpha, Direction::Left).output;
    const SampledFunction eta_df = calculus::mollify(df, eps);
    KahanSum num, den;
    for (std::size_t i = 0; i <= g.n; ++i) {
        const double x = g.node(i);
        if (std::fabs(x) > 8.0 - 4.0 * eps) continue;
        if (d_fe.is_excluded(i) || eta_df.is_excluded(i)) continue;
        const double d = d_fe.values[i] - eta_df.values[i];
        num.add(d * d);
        den.add(d_fe.values[i] * d_fe.values[i]);
    }
    s.add(calculus::make_report("mollifier-commutation",
                                std::sqrt(num.value() / std::max(den.value(), 1e-300)), tol,
                                {{"alpha", s.cfg.alpha}, {"epsilon", eps}}));
}

void suite_equivalences(SuiteRunner& s) {
    const Grid g = make_grid(s.cfg);
    const double alpha = s.cfg.alpha;
    // Caputo = RL - boundary term, exact at the discrete level
    const SampledFunction f = sample(g, [&](double x) { return std::sin(M_PI * (x - g.a)); });
    const SampledFunction rl = rl_derivative(f, alpha, Direction::Left).output;
    const SampledFunction ca = caputo_derivative(f, alpha, Direction::Left).output;
    double worst = 0.0;
    for (std::size_t i = 1; i <= g.n; ++i) {
        const double bt = f.values[0] * std::pow(g.node(i) - g.a, -alpha) *
                          reciprocal_gamma(1.0 - alpha);
        worst = std::max(worst, std::fabs(ca.values[i] - (rl.values[i] - bt)));
    }
    s.add(calculus::make_report("caputo-equals-rl-minus-boundary", worst,
                                tolerance_for(s.cfg, "caputo_rl", 1e-10), {{"alpha", alpha}}));

    // GL -> RL refinement order
    double prev = 0.0, order = 0.0;
    for (std::size_t nn : {g.n / 4, g.n / 2, g.n}) {
        const Grid gg = make_uniform_grid(g.a, g.b, nn, DomainKind::FiniteInterval);
        const SampledFunction ff =
            sample(gg, [&](double x) { return std::sin(M_PI * (x - g.a)); });
        const SampledFunction glv = gl_derivative(ff, alpha, Direction::Left).output;
        const SampledFunction rlv = rl_derivative(ff, alpha, Direction::Left).output;
        double w = 0.0;
        for (std::size_t i = 0; i <= nn; ++i) {
            const double x = gg.node(i);
            if (x < g.a + 0.05 * (g.b - g.a) || x > g.b - 0.05 * (g.b - g.a)) continue;
            if (glv.is_excluded(i) || rlv.is_excluded(i)) continue;
            w = std::max(w, std::fabs(glv.values[i] - rlv.values[i]));
        }
        if (prev > 0.0) order = std::log2(prev / w);
        prev = w;
    }
    s.add(calculus::make_report("gl-rl-refinement-order",
                                std::max(0.0, (0.8 - order) / 0.8), 0.0,
                                {{"order", order}, {"alpha", alpha}}));

    // Fourier = left RL on compactly supported bumps
    const Grid gt = make_uniform_grid(-8.0, 8.0, g.n, DomainKind::TruncatedLine);
    const SampledFunction fb = sample(gt, [](double x) { return smooth_bump(x, 0.0, 1.5); });
    const SampledFunction fo = fourier_derivative(fb, alpha).output;
    const SampledFunction rlb = rl_derivative(fb, alpha, Direction::Left).output;
    double w = 0.0, scale = 0.0;
    for (std::size_t i = 0; i <= gt.n; ++i) {
        if (std::fabs(gt.node(i)) > 1.5) continue;
        if (rlb.is_excluded(i)) continue;
        scale = std::max(scale, std::fabs(rlb.values[i]));
        w = std::max(w, std::fabs(fo.values[i] - rlb.values[i]));
    }
    s.add(calculus::make_report("fourier-equals-left-rl", w / scale,
                                tolerance_for(s.cfg, "fourier_rl", 1e-3), {{"alpha", alpha}}));
}

void suite_sobolev(SuiteRunner& s) {
    const Grid g = make_grid(s.cfg);
    // Gagliardo seminorm of u(x)=x against the 2-D quadrature oracle value
    const SampledFunction ux = sample(g, [&](double x) { return x - g.a; });
    const double got = sobolev::gagliardo_seminorm(ux, 0.25, 2.0);
    const double len = g.b - g.a;
    // iint |x-y|^(1/2) dx dy over a square of side L = 8/15 L^(5/2)
    const double expect = std::sqrt(8.0 / 15.0 * std::pow(len, 2.5));
    s.add(calculus::make_report("gagliardo-linear-oracle", std::fabs(got / expect - 1.0),
                                tolerance_for(s.cfg, "gagliardo", 0.02),
                                {{"value", got}, {"expect", expect}}));

    // Plancherel equivalence on the line
    const Grid gt = make_uniform_grid(-8.0, 8.0, g.n, DomainKind::TruncatedLine);
    const SampledFunction fb = sample(gt, [](double x) { return smooth_bump(x, 0.0, 2.0); });
    for (double alpha : s.alphas()) {
        const double ratio = sobolev::h_alpha_equivalence_ratio(fb, alpha);
        s.add(calculus::make_report("plancherel-ratio[a=" + std::to_string(alpha) + "]",
                                    std::fabs(ratio - 1.0),
                                    tolerance_for(s.cfg, "plancherel", 0.02),
                                    {{"ratio", ratio}}));
    }

    // Regime dichotomy for the step function
    for (double alpha : {0.25, 0.75}) {
        double prev = 0.0, min_growth = 1e9, max_growth = -1e9;
        for (std::size_t nn : {g.n / 8, g.n / 4, g.n / 2, g.n}) {
            const Grid gs = make_uniform_grid(-1.0, 1.0, nn, DomainKind::FiniteInterval);
            const SampledFunction us =
                sample(gs, [](double x) { return x <= 0.0 ? 0.5 : 1.5; });
            const double nm =
                sobolev::frac_sobolev_norm(us, {alpha, 2.0, sobolev::Side::Left});
            if (prev > 0.0) {
                min_growth = std::min(min_growth, nm / prev - 1.0);
                max_growth = std::max(max_growth, nm / prev - 1.0);
            }
            prev = nm;
        }
        const bool diverging_regime = alpha * 2.0 > 1.0;
        const double residual =
            diverging_regime ? (min_growth >= 0.10 ? 0.0 : 1.0)
                             : (max_growth <= 0.10 ? 0.0 : 1.0);
        s.add(calculus::make_report(
            std::string("step-norm-") + (diverging_regime ? "divergent" : "stable") +
                "[a=" + std::to_string(alpha) + "]",
            residual, 0.0, {{"min_growth", min_growth}, {"max_growth", max_growth}}));
    }
}

void suite_poincare(SuiteRunner& s) {
    const Grid g = make_grid(s.cfg);
    const SampledFunction f = bump_on(g, 0.45, 0.6);
    for (double alpha : s.alphas()) {
        const auto r = sobolev::poincare_ratio(f, alpha, 2.0, Direction::Left);
        const double bound =
            std::pow(g.b - g.a, alpha) / (alpha * gamma(alpha));
        s.add(calculus::make_report("poincare-bound[a=" + std::to_string(alpha) + "]",
                                    std::max(0.0, r.ratio / bound - 1.0),
                                    tolerance_for(s.cfg, "poincare", 0.05),
                                    {{"ratio", r.ratio}, {"bound", bound}}));
    }
}

void suite_pollution(SuiteRunner& s) {
    const Grid g = make_grid(s.cfg);
    const double len = g.b - g.a;
    const SampledFunction phi = bump_on(g, 0.25, 0.4);
    for (double alpha : s.alphas()) {
        std::vector<double> xs;
        for (double x = g.b + 2.0 * len; x <= g.b + 100.0 * len; x *= 1.25)
            xs.push_back(x);
        const auto tail = sobolev::pollution_tail(phi, alpha, Direction::Left, xs);
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double lx = std::log(xs[i]);
            const double ly = std::log(std::fabs(tail[i]));
            sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
        }
        const double m = static_cast<double>(xs.size());
        const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        s.add(calculus::make_report("pollution-far-field[a=" + std::to_string(alpha) + "]",
                                    std::fabs(slope + 1.0 + alpha) / (1.0 + alpha),
                                    tolerance_for(s.cfg, "pollution", 0.05),
                                    {{"slope", slope}, {"expect", -(1.0 + alpha)}}));
    }
}

void suite_extensions(SuiteRunner& s) {
    const Grid g = make_grid(s.cfg);
    const SampledFunction fb = bump_on(s.cfg.kind == DomainKind::TruncatedLine
                                           ? make_uniform_grid(g.a, g.b, g.n,
                                                               DomainKind::FiniteInterval)
                                           : g,
                                       0.5, 0.4);
    const auto te = sobolev::trivial_extension(fb, 0.5, 2.0, g.b - g.a);
    s.add(calculus::make_report("trivial-extension-bounded",
                                std::isfinite(te.norm_ratio) ? 0.0 : 1.0, 0.0,
                                {{"norm_ratio", te.norm_ratio}}));

    const SampledFunction uc = sample(g, [](double) { return 1.0; });
    const auto ee = sobolev::exterior_extension(uc, 0.25, 2.0, 8.0);
    s.add(calculus::make_report("exterior-extension-accepts",
                                std::isfinite(ee.norm_ratio) ? 0.0 : 1.0, 0.0,
                                {{"norm_ratio", ee.norm_ratio}}));
    double rejected = 1.0;
    try {
        sobolev::exterior_extension(uc, 0.6, 2.0, 8.0);
        rejected = 0.0;
    } catch (const PreconditionError&) {
    }
    s.add(calculus::make_report("exterior-extension-rejects-alpha-p", 1.0 - rejected, 0.0, {}));
    rejected = 1.0;
    try {
        sobolev::exterior_extension(uc, 0.25, 2.0, 4.0);
        rejected = 0.0;
    } catch (const PreconditionError&) {
    }
    s.add(calculus::make_report("exterior-extension-rejects-mu", 1.0 - rejected, 0.0, {}));
}

}  // namespace

int cmd_verify(const RunConfig& cfg) {
    SuiteRunner runner{cfg, {}};
    const std::string& suite = cfg.suite;
    const bool all = suite == "all";
    bool known = false;
    // A suite aborting (e.g. an extrapolation that cannot settle on a coarse
    // grid) is reported as a failing identity, not a process error, so the
    // exit-code contract stays 1 for any kind of identity failure.
    auto guarded = [&](const char* name, void (*fn)(SuiteRunner&)) {
        if (!all && suite != name) return;
        known = true;
        try {
            fn(runner);
        } catch (const Error& e) {
            runner.add(calculus::make_report(std::string(name) + "-suite-aborted: " + e.what(),
                                             1.0, 0.0, {}));
        }
    };
    guarded("ftfc", suite_ftfc);
    guarded("product", suite_product);
    guarded("chain", suite_chain);
    guarded("ibp", suite_ibp);
    guarded("weak", suite_weak);
    guarded("mollify", suite_mollify);
    guarded("equivalences", suite_equivalences);
    guarded("sobolev", suite_sobolev);
    guarded("poincare", suite_poincare);
    guarded("pollution", suite_pollution);
    guarded("extensions", suite_extensions);
    if (!known)
        throw ConfigError("unknown suite '" + suite +
                          "' (ftfc|product|chain|ibp|weak|mollify|equivalences|sobolev|"
                          "poincare|pollution|extensions|all)");

    const std::string dir = cfg.output.empty() ? "reports" : cfg.output;
    bool all_pass = true;
    nlohmann::json summary = nlohmann::json::array();
    for (const auto& r : runner.reports) {
        all_pass = all_pass && r.pass;
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.identity_name
                  << "  residual=" << format_double(r.residual_norm)
                  << " tolerance=" << format_double(r.tolerance) << "\n";
        summary.push_back(nlohmann::json::parse(calculus::report_to_json(r)));
    }
    write_file_atomic(dir + "/verify_" + suite + ".json", summary.dump(2) + "\n");
    std::cout << (all_pass ? "all identities pass" : "some identities FAILED") << "\n";
    return all_pass ? kExitPass : kExitIdentityFailure;
}

int cmd_convergence(const RunConfig& cfg) {
    // Errors against the closed-form oracle for the power-law/constant family.
    double mu = 0.0, amplitude = 1.0;
    if (cfg.function.kind == FunctionSpec::Kind::Power) {
        mu = cfg.function.p0;
    } else if (cfg.function.kind == FunctionSpec::Kind::Constant) {
        amplitude = cfg.function.p0;
    } else {
        throw ConfigError("convergence studies need a power or constant function spec");
    }

    const bool derivative = cfg.op != "rl-int";
    std::string csv = "n,error,order\n";
    double prev = 0.0;
    for (std::size_t nn : cfg.ladder) {
        const Grid g = make_uniform_grid(cfg.a, cfg.b, nn, cfg.kind);
        const SampledFunction f = realize(cfg.function, g);
        const OperatorResult r = run_operator(cfg, f);
        const double coeff =
            amplitude * (derivative ? oracle::power_law_derivative_coeff(mu, cfg.alpha)
                                    : oracle::power_law_integral_coeff(mu, cfg.alpha));
        const double expo = derivative ? mu - cfg.alpha : mu + cfg.alpha;
        double err = 0.0;
        for (std::size_t i = 0; i <= nn; ++i) {
            const double x = g.node(i);
            const double d = (cfg.direction == Direction::Left) ? x - g.a : g.b - x;
            if (d < 0.05 * (g.b - g.a)) continue;
            if (r.output.is_excluded(i)) continue;
            err = std::max(err, std::fabs(r.output.values[i] - coeff * std::pow(d, expo)));
        }
        csv += std::to_string(nn) + "," + format_double(err) + ",";
        if (err == 0.0)
            csv += "exact";
        else if (prev > 0.0)
            csv += format_double(std::log2(prev / err));
        csv += "\n";
        prev = err;
    }
    const std::string out = cfg.output.empty() ? "fracalc_convergence.csv" : cfg.output;
    write_file_atomic(out, csv);
    std::cout << "wrote " << out << "\n";
    return kExitPass;
}

int cmd_norm(const RunConfig& cfg) {
    const Grid g = make_grid(cfg);
    const SampledFunction f = realize(cfg.function, g);
    nlohmann::json j;
    j["config"] = cfg.to_json();
    if (cfg.norm_kind == "sobolev") {
        sobolev::SobolevSpec spec{cfg.alpha, cfg.sigma_p,
                                  cfg.direction == Direction::Left ? sobolev::Side::Left
                                                                   : sobolev::Side::Right};
        j["norm"] = sobolev::frac_sobolev_norm(f, spec);
    } else if (cfg.norm_kind == "gagliardo") {
        j["norm"] = sobolev::gagliardo_seminorm(f, cfg.alpha, cfg.sigma_p);
    } else if (cfg.norm_kind == "fourier") {
        j["norm"] = sobolev::fourier_seminorm(f, cfg.alpha);
    } else if (cfg.norm_kind == "lp") {
        j["norm"] = lp_norm(f, cfg.sigma_p);
    } else {
        throw ConfigError("unknown norm '" + cfg.norm_kind + "' (sobolev|gagliardo|fourier|lp)");
    }
    const std::string text = j.dump(2) + "\n";
    if (!cfg.output.empty()) write_file_atomic(cfg.output, text);
    std::cout << text;
    return kExitPass;
}

int run(int argc, const char* const* argv) {
    try {
        CLI::App app{"fracalc: fractional-calculus operators and verification suites"};
        app.require_subcommand(1);

        RunConfig cfg;
        std::string function_text = "constant:1";
        std::string config_path;
        std::string direction_text = "left";
        std::string domain_text;

        auto add_common = [&](CLI::App* sub) {
            sub->add_option("--config", config_path, "JSON config file (overrides flags)");
            sub->add_option("--f", function_text, "function spec, e.g. power:0.5");
            sub->add_option("--alpha", cfg.alpha, "fractional order");
            sub->add_option("--p", cfg.sigma_p, "Lebesgue exponent");
            sub->add_option("--dir", direction_text, "left|right");
            sub->add_option("--domain", domain_text, "a,b,n[,kind] (kind: finite|line)");
            sub->add_option("--n", cfg.n, "grid intervals");
            sub->add_option("-o,--output", cfg.output, "output file/directory");
            sub->add_option("--format", cfg.format, "csv|json")
                ->check(CLI::IsMember({"csv", "json"}));
            sub->add_option("--seed", cfg.seed, "seed for randomized selections");
        };

        auto* compute = app.add_subcommand("compute", "apply an operator, write CSV/JSON");
        compute->add_option("--op", cfg.op, "rl-int|rl-deriv|caputo|weak-caputo|gl|fourier");
        add_common(compute);
        auto* verify = app.add_subcommand("verify", "run identity verification suites");
        verify->add_option("--suite", cfg.suite,
                           "ftfc|product|chain|ibp|weak|mollify|equivalences|sobolev|"
                           "poincare|pollution|extensions|all");
        add_common(verify);
        // Suite tolerances are calibrated at the acceptance resolution;
        // coarser grids are allowed but may fail with under-resolved
        // residuals (that is diagnosable, documented behavior).
        verify->parse_complete_callback([&] {
            if (verify->count("--n") == 0 && verify->count("--domain") == 0) cfg.n = 4096;
        });
        auto* convergence = app.add_subcommand("convergence", "grid-refinement study");
        convergence->add_option("--op", cfg.op, "operator under study");
        convergence->add_option("--ladder", cfg.ladder, "n values");
        add_common(convergence);
        auto* norm = app.add_subcommand("norm", "fractional Sobolev / Gagliardo / Fourier norms");
        norm->add_option("--norm", cfg.norm_kind, "sobolev|gagliardo|fourier|lp");
        add_common(norm);

        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e);
            return code == 0 ? kExitPass : kExitConfigError;
        }

        if (const char* env = std::getenv("FRACALC_THREADS")) {
            try {
                cfg.threads = std::max(1, std::stoi(env));
            } catch (const std::exception&) {
                throw ConfigError("FRACALC_THREADS must be a positive integer");
            }
        }

        cfg.function = FunctionSpec::parse_cli(function_text);
        cfg.direction = (direction_text == "right") ? Direction::Right : Direction::Left;
        if (direction_text != "left" && direction_text != "right")
            throw ConfigError("--dir must be left or right");
        if (!domain_text.empty()) {
            std::stringstream ss(domain_text);
            std::string item;
            std::vector<std::string> parts;
            while (std::getline(ss, item, ',')) parts.push_back(item);
            if (parts.size() < 3) throw ConfigError("--domain needs a,b,n[,kind]");
            try {
                cfg.a = std::stod(parts[0]);
                cfg.b = std::stod(parts[1]);
                cfg.n = std::stoul(parts[2]);
            } catch (const std::exception&) {
                throw ConfigError("--domain needs numeric a,b,n");
            }
            if (parts.size() > 3)
                cfg.kind = (parts[3] == "line") ? DomainKind::TruncatedLine
                                                : DomainKind::FiniteInterval;
        }
        if (compute->parsed()) cfg.command = "compute";
        if (verify->parsed()) cfg.command = "verify";
        if (convergence->parsed()) cfg.command = "convergence";
        if (norm->parsed()) cfg.command = "norm";

        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw ConfigError("cannot read config " + config_path);
            nlohmann::json j;
            try {
                in >> j;
            } catch (const nlohmann::json::exception& e) {
                throw ConfigError(std::string("invalid config JSON: ") + e.what());
            }
            RunConfig file_cfg = RunConfig::from_json(j);
            if (file_cfg.command.empty()) file_cfg.command = cfg.command;
            cfg = file_cfg;
        }

        if (cfg.command == "compute") return cmd_compute(cfg);
        if (cfg.command == "verify") return cmd_verify(cfg);
        if (cfg.command == "convergence") return cmd_convergence(cfg);
        if (cfg.command == "norm") return cmd_norm(cfg);
        throw ConfigError("no command given");
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition failed [" << e.code() << "]: " << e.what() << "\n";
        return kExitPreconditionError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPreconditionError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPreconditionError;
    }
}

}  // namespace cli
}  // namespace fracalc
