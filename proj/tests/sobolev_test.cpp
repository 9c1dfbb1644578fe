#include <doctest.h>

#include <cmath>

#include "fracalc/calculus.hpp"
#include "fracalc/norms.hpp"
#include "fracalc/sobolev.hpp"
#include "fracalc/special.hpp"
#include "test_support.hpp"

using namespace fracalc;
using namespace fracalc::sobolev;
using calculus::smooth_bump;

namespace {
const std::size_t kN = 2048;
}

TEST_CASE("fractional sobolev norm example and axioms") {
    const Grid g = make_uniform_grid(0.0, 1.0, 4096, DomainKind::FiniteInterval);
    const SampledFunction u = sample(g, [](double x) { return std::sqrt(x); });
    const SobolevSpec spec{0.5, 2.0, Side::Left};
    // D^0.5 x^0.5 = Gamma(1.5): norm = sqrt(1/2 + pi/4)
    CHECK(frac_sobolev_norm(u, spec) ==
          doctest::Approx(std::sqrt(0.5 + M_PI / 4.0)).epsilon(1e-3));

    const SampledFunction zero = sample(g, [](double) { return 0.0; });
    CHECK(frac_sobolev_norm(zero, spec) == 0.0);

    // homogeneity
    SampledFunction u3 = u;
    for (double& v : u3.values) v *= -3.0;
    CHECK(frac_sobolev_norm(u3, spec) ==
          doctest::Approx(3.0 * frac_sobolev_norm(u, spec)).epsilon(1e-12));

    // triangle inequality on random smooth pairs
    const Grid gs = make_uniform_grid(0.0, 1.0, 512, DomainKind::FiniteInterval);
    for (unsigned seed = 1; seed <= 6; ++seed) {
        const auto ca = testsupport::random_samples(4, seed, 0.2, 2.0);
        const SampledFunction a = sample(gs, [&](double x) {
            return ca[0] * std::sin(ca[1] * x) + ca[2] * x * x + ca[3];
        });
        const auto cb = testsupport::random_samples(4, seed + 31, 0.2, 2.0);
        const SampledFunction b = sample(gs, [&](double x) {
            return cb[0] * std::cos(cb[1] * x) + cb[2] * x + cb[3];
        });
        SampledFunction s = a;
        for (std::size_t i = 0; i < s.size(); ++i) s.values[i] += b.values[i];
        for (auto side : {Side::Left, Side::Right, Side::Symmetric}) {
            const SobolevSpec sp{0.5, 2.0, side};
            CHECK(frac_sobolev_norm(s, sp) <=
                  frac_sobolev_norm(a, sp) + frac_sobolev_norm(b, sp) + 1e-10);
        }
    }
}

TEST_CASE("gagliardo seminorm: constants, shifts, oracle, scaling") {
    const Grid g = make_uniform_grid(0.0, 1.0, kN, DomainKind::FiniteInterval);
    const SampledFunction c = sample(g, [](double) { return 4.0; });
    CHECK(gagliardo_seminorm(c, 0.3, 2.0) == 0.0);

    // adding a constant changes nothing
    const SampledFunction u = sample(g, [](double x) { return std::sin(3.0 * x); });
    SampledFunction shifted = u;
    for (double& v : shifted.values) v += 11.0;
    CHECK(gagliardo_seminorm(shifted, 0.3, 2.0) ==
          doctest::Approx(gagliardo_seminorm(u, 0.3, 2.0)).epsilon(1e-10));

    // 2-D quadrature oracle for u(x) = x: iint |x-y|^(1/2) = 8/15
    const SampledFunction lin = sample(g, [](double x) { return x; });
    CHECK(gagliardo_seminorm(lin, 0.25, 2.0) ==
          doctest::Approx(std::sqrt(8.0 / 15.0)).epsilon(0.02));

    // dilation law [u(lambda .)] = lambda^(sigma - 1/p) [u]
    const Grid gw = make_uniform_grid(-4.0, 4.0, kN, DomainKind::FiniteInterval);
    const double sigma = 0.4, p = 2.0, lambda = 0.5;
    const SampledFunction b1 = sample(gw, [](double x) { return smooth_bump(x, 0.0, 1.0); });
    const SampledFunction bl =
        sample(gw, [&](double x) { return smooth_bump(lambda * x, 0.0, 1.0); });
    const double expect = std::pow(lambda, sigma - 1.0 / p) * gagliardo_seminorm(b1, sigma, p);
    CHECK(gagliardo_seminorm(bl, sigma, p) == doctest::Approx(expect).epsilon(0.05));

    CHECK_THROWS_AS(gagliardo_seminorm(c, 1.5, 2.0), PreconditionError);
}

TEST_CASE("fourier seminorm gaussian oracle and Plancherel limit") {
    const Grid g = make_uniform_grid(-12.0, 12.0, 4096, DomainKind::TruncatedLine);
    const SampledFunction u = sample(g, [](double x) { return std::exp(-0.5 * x * x); });
    // (1/2pi) int |xi|^(2s) |u^|^2 dxi = Gamma(s + 1/2) for the unit gaussian
    for (double s : {0.25, 0.5, 0.75}) {
        CHECK(fourier_seminorm(u, s) ==
              doctest::Approx(std::sqrt(fracalc::gamma(s + 0.5))).epsilon(0.01));
    }
    // s -> 0 recovers the L2 norm under the convention's normalization
    CHECK(fourier_seminorm(u, 1e-6) == doctest::Approx(lp_norm(u, 2.0)).epsilon(0.01));
}

TEST_CASE("plancherel equivalence ratio is one across profiles") {
    const Grid g = make_uniform_grid(-8.0, 8.0, 4096, DomainKind::TruncatedLine);
    const SampledFunction profiles[] = {
        sample(g, [](double x) { return smooth_bump(x, 0.0, 2.0); }),
        sample(g, [](double x) { double b = smooth_bump(x, 0.0, 2.0); return b * b; }),
        sample(g,
               [](double x) { return std::exp(-x * x) * smooth_bump(x, 0.0, 3.0); }),
    };
    for (const auto& u : profiles) {
        for (double alpha : {0.25, 0.5, 0.75}) {
            CHECK(h_alpha_equivalence_ratio(u, alpha) ==
                  doctest::Approx(1.0).epsilon(0.02));
        }
    }
    // translation invariance of the modulus
    const SampledFunction shifted =
        sample(g, [](double x) { return smooth_bump(x, 1.5, 2.0); });
    CHECK(h_alpha_equivalence_ratio(shifted, 0.5) ==
          doctest::Approx(h_alpha_equivalence_ratio(profiles[0], 0.5)).epsilon(0.01));
}

TEST_CASE("trace operator") {
    const Grid g = make_uniform_grid(0.0, 1.0, kN, DomainKind::FiniteInterval);
    const SampledFunction lin = sample(g, [](double x) { return x; });
    const auto t = trace(lin, {0.8, 2.0, Side::Left});
    CHECK(t.value == doctest::Approx(1.0));

    const double alpha = 0.8;
    const SampledFunction kap =
        sample(g, [&](double x) { return std::pow(x, alpha - 1.0); }, {0});
    CHECK(trace(kap, {alpha, 2.0, Side::Left}).value ==
          doctest::Approx(std::pow(1.0, alpha - 1.0)).epsilon(1e-6));
    // right space evaluates at a; kernel anchored at b
    const SampledFunction kap_r =
        sample(g, [&](double x) { return std::pow(1.0 - x, alpha - 1.0); }, {g.n});
    CHECK(trace(kap_r, {alpha, 2.0, Side::Right}).value ==
          doctest::Approx(1.0).epsilon(1e-6));

    CHECK_THROWS_AS(trace(lin, {0.4, 2.0, Side::Left}), PreconditionError);  // alpha p <= 1
    CHECK_THROWS_AS(trace(lin, {0.8, kInfinityP, Side::Left}), PreconditionError);

    // trace constant stays within a factor 3 across a smooth family
    double lo = 1e300, hi = 0.0;
    const SampledFunction fam[] = {
        sample(g, [](double x) { return x; }),
        sample(g, [](double x) { return x * x + 0.5; }),
        sample(g, [](double x) { return std::sin(2.0 * x) + 1.2; }),
        sample(g, [](double x) { return std::exp(-x) + x; }),
    };
    for (const auto& u : fam) {
        const auto r = trace(u, {0.8, 2.0, Side::Left});
        lo = std::min(lo, r.norm_ratio);
        hi = std::max(hi, r.norm_ratio);
    }
    CHECK(hi / lo <= 3.0);
}

TEST_CASE("poincare ratio examples and bound") {
    const Grid g = make_uniform_grid(0.0, 1.0, 4096, DomainKind::FiniteInterval);
    const SampledFunction u = sample(g, [](double x) { return std::sqrt(x); });
    const auto r = poincare_ratio(u, 0.5, 2.0, Direction::Left);
    CHECK_FALSE(r.kernel_element);
    CHECK(r.ratio == doctest::Approx(std::sqrt(0.5) / fracalc::gamma(1.5)).epsilon(1e-3));

    const SampledFunction kap = sample(g, [](double x) { return 2.0 / std::sqrt(x); }, {0});
    const auto rk = poincare_ratio(kap, 0.5, 2.0, Direction::Left);
    CHECK(rk.kernel_element);
    CHECK(rk.numerator < 1e-6);

    for (double alpha : {0.25, 0.5, 0.75}) {
        const double bound = 1.0 / (alpha * fracalc::gamma(alpha));
        const SampledFunction fam[] = {
            sample(g, [](double x) { return smooth_bump(x, 0.5, 0.3); }),
            sample(g, [](double x) { return std::sin(M_PI * x); }),
            sample(g, [](double x) { return x * (1.0 - x) * (2.0 + x); }),
        };
        for (const auto& f : fam) {
            const auto rr = poincare_ratio(f, alpha, 2.0, Direction::Left);
            CHECK(rr.ratio <= bound * 1.05);
        }
    }
}

TEST_CASE("step-function norm dichotomy across the alpha p = 1 line") {
    auto step_norm = [](double alpha, std::size_t n) {
        const Grid g = make_uniform_grid(-1.0, 1.0, n, DomainKind::FiniteInterval);
        const SampledFunction u = sample(g, [](double x) { return x <= 0.0 ? 0.5 : 1.5; });
        return frac_sobolev_norm(u, {alpha, 2.0, Side::Left});
    };
    // alpha p < 1: refinement-stable
    double prev = step_norm(0.25, 512);
    for (std::size_t n : {1024u, 2048u, 4096u}) {
        const double cur = step_norm(0.25, n);
        CHECK(cur / prev < 1.10);
        prev = cur;
    }
    // alpha p > 1: >= 10% growth per doubling, three consecutive doublings
    prev = step_norm(0.75, 512);
    for (std::size_t n : {1024u, 2048u, 4096u}) {
        const double cur = step_norm(0.75, n);
        CHECK(cur / prev >= 1.10);
        prev = cur;
    }
}

TEST_CASE("sobolev conjugate scaling invariance") {
    const Grid g = make_uniform_grid(-8.0, 8.0, kN, DomainKind::TruncatedLine);
    const SampledFunction u = sample(g, [](double x) { return smooth_bump(x, 0.0, 1.5); });
    const auto r = sobolev_conjugate_check(u, 0.25, 2.0);
    CHECK(r.p_star == doctest::Approx(4.0));
    CHECK(r.max_deviation <= 0.05);

    CHECK_THROWS_AS(sobolev_conjugate_check(u, 0.6, 2.0), PreconditionError);
    const SampledFunction zero = sample(g, [](double) { return 0.0; });
    CHECK_THROWS_AS(sobolev_conjugate_check(zero, 0.25, 2.0), PreconditionError);
}

TEST_CASE("pollution tail decay, far-field law and guards") {
    const Grid g = make_uniform_grid(0.0, 1.0, 1024, DomainKind::FiniteInterval);
    const SampledFunction phi = sample(g, [](double x) { return smooth_bump(x, 0.5, 0.3); });
    const double alpha = 0.5;

    std::vector<double> xs;
    for (double x = 2.0; x <= 150.0; x *= 1.4) xs.push_back(x);
    const auto tail = pollution_tail(phi, alpha, Direction::Left, xs);
    for (std::size_t i = 1; i < tail.size(); ++i)
        CHECK(std::fabs(tail[i]) < std::fabs(tail[i - 1]));  // monotone decay

    // slope of the far field against the first-moment-corrected coordinate
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double lx = std::log(xs[i] - 0.5);  // bump is centered at 0.5
        const double ly = std::log(std::fabs(tail[i]));
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    }
    const double m = static_cast<double>(xs.size());
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    CHECK(slope == doctest::Approx(-(1.0 + alpha)).epsilon(0.02));

    const SampledFunction zero = sample(g, [](double) { return 0.0; });
    const auto zt = pollution_tail(zero, alpha, Direction::Left, {2.0});
    CHECK(zt[0] == 0.0);

    CHECK_THROWS_AS(pollution_tail(phi, alpha, Direction::Left, {0.5}), PreconditionError);
    CHECK_THROWS_AS(pollution_tail(phi, alpha, Direction::Right, {0.5}), PreconditionError);
    // right direction mirrors
    const auto rt = pollution_tail(phi, alpha, Direction::Right, {-2.0});
    const auto lt = pollution_tail(phi, alpha, Direction::Left, {3.0});
    CHECK(rt[0] == doctest::Approx(lt[0]).epsilon(1e-10));  // symmetric bump, symmetric dist
}

TEST_CASE("trivial extension") {
    const Grid g = make_uniform_grid(0.0, 1.0, kN, DomainKind::FiniteInterval);
    const SampledFunction zero = sample(g, [](double) { return 0.0; });
    const auto rz = trivial_extension(zero, 0.5, 2.0, 1.0);
    CHECK(rz.norm_ratio == 1.0);

    const SampledFunction bump =
        sample(g, [](double x) { return smooth_bump(x, 0.5, 0.25); });
    const auto r = trivial_extension(bump, 0.5, 2.0, 1.0);
    CHECK(std::isfinite(r.norm_ratio));
    // extension reproduces u exactly on the original nodes
    const std::size_t off = (r.extended.grid.n - g.n) / 2;
    for (std::size_t i = 0; i <= g.n; ++i)
        CHECK(r.extended.values[off + i] == bump.values[i]);
    // ratio stays stable under refinement (oracle: the continuum constant)
    const Grid g2 = make_uniform_grid(0.0, 1.0, 2 * kN, DomainKind::FiniteInterval);
    const SampledFunction bump2 =
        sample(g2, [](double x) { return smooth_bump(x, 0.5, 0.25); });
    const auto r2 = trivial_extension(bump2, 0.5, 2.0, 1.0);
    CHECK(r2.norm_ratio == doctest::Approx(r.norm_ratio).epsilon(0.02));

    const SampledFunction notcompact = sample(g, [](double x) { return 1.0 + x; });
    CHECK_THROWS_AS(trivial_extension(notcompact, 0.5, 2.0, 1.0), PreconditionError);
}

TEST_CASE("exterior extension gates and construction") {
    const Grid g = make_uniform_grid(0.0, 1.0, kN, DomainKind::FiniteInterval);
    const SampledFunction one = sample(g, [](double) { return 1.0; });
    const auto r = exterior_extension(one, 0.25, 2.0, 8.0);
    CHECK(std::isfinite(r.norm_ratio));
    // equals u on the interior nodes of (0,1)
    for (std::size_t i = 0; i <= g.n; ++i)
        CHECK(r.extended.values[g.n + i] == doctest::Approx(1.0));
    // periodic copy on (1, 2) before the cutoff turns down to zero
    CHECK(r.extended.values[2 * g.n + g.n / 10] > 0.0);
    CHECK(r.extended.values[0] == 0.0);

    CHECK_THROWS_WITH_AS(exterior_extension(one, 0.6, 2.0, 8.0),
                         "exterior extension requires alpha*p < 1", PreconditionError);
    try {
        exterior_extension(one, 0.25, 2.0, 4.0);
        CHECK(false);
    } catch (const PreconditionError& e) {
        CHECK(e.code() == "mu_too_small");
    }
}

TEST_CASE("holder quotient bounded and refinement-stable when alpha p > 1") {
    auto quotient = [](std::size_t n) {
        const Grid g = make_uniform_grid(0.0, 1.0, n, DomainKind::FiniteInterval);
        const SampledFunction u =
            sample(g, [](double x) { return std::sqrt(x) + 0.2 * std::sin(3.0 * x); });
        return holder_quotient(u, 0.8, 2.0);
    };
    const double q1 = quotient(256), q2 = quotient(512), q3 = quotient(1024);
    CHECK(std::isfinite(q3));
    CHECK(q2 == doctest::Approx(q1).epsilon(0.1));
    CHECK(q3 == doctest::Approx(q2).epsilon(0.1));
}
