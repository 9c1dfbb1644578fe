#include <doctest.h>

#include <cmath>

#include "fracalc/grid.hpp"
#include "fracalc/norms.hpp"
#include "fracalc/serialize.hpp"
#include "fracalc/special.hpp"
#include "test_support.hpp"

using namespace fracalc;

TEST_CASE("make_uniform_grid basics") {
    const Grid g = make_uniform_grid(0.0, 1.0, 4, DomainKind::FiniteInterval);
    CHECK(g.num_nodes() == 5);
    CHECK(g.node(0) == 0.0);
    CHECK(g.node(1) == doctest::Approx(0.25));
    CHECK(g.node(4) == 1.0);

    const Grid w = make_uniform_grid(-8.0, 8.0, 1024, DomainKind::TruncatedLine);
    CHECK(w.spacing() == doctest::Approx(0.015625));

    CHECK_THROWS_AS(make_uniform_grid(1.0, 0.0, 4, DomainKind::FiniteInterval),
                    PreconditionError);
    CHECK_THROWS_AS(make_uniform_grid(0.0, 1.0, 1, DomainKind::FiniteInterval),
                    PreconditionError);
    CHECK_THROWS_AS(make_uniform_grid(0.0, INFINITY, 4, DomainKind::FiniteInterval),
                    PreconditionError);
}

TEST_CASE("sampled function validation") {
    const Grid g = make_uniform_grid(0.0, 1.0, 4, DomainKind::FiniteInterval);
    CHECK_THROWS_AS(SampledFunction(g, {1.0, 2.0}), PreconditionError);
    CHECK_THROWS_AS(SampledFunction(g, {1, 2, 3, 4, INFINITY}), PreconditionError);
    // infinities allowed at excluded nodes
    const SampledFunction ok(g, {INFINITY, 2, 3, 4, 5}, {0});
    CHECK(ok.is_excluded(0));
    CHECK_THROWS_AS(SampledFunction(g, {1, 2, 3, 4, 5}, {9}), PreconditionError);
}

TEST_CASE("gamma known values and conventions") {
    CHECK(fracalc::gamma(1.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(fracalc::gamma(0.5) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-13));
    CHECK(fracalc::gamma(5.0) == doctest::Approx(24.0).epsilon(1e-13));
    CHECK(reciprocal_gamma(0.0) == 0.0);
    CHECK(reciprocal_gamma(-3.0) == 0.0);
    CHECK(reciprocal_gamma(2.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(fracalc::gamma(0.0), PreconditionError);
    CHECK_THROWS_AS(fracalc::gamma(-2.0), PreconditionError);
    CHECK_THROWS_AS(fracalc::gamma(200.0), PreconditionError);

    // negative non-integer arguments via reflection, cross-checked with std
    for (double x : {-0.75, -0.5, -0.25, -1.5, -2.3}) {
        CHECK(fracalc::gamma(x) == doctest::Approx(std::tgamma(x)).epsilon(1e-12));
    }
}

TEST_CASE("gamma functional equation on [0.1, 50]") {
    for (int i = 0; i <= 499; ++i) {
        const double x = 0.1 + i * 0.1;
        const double lhs = fracalc::gamma(x + 1.0);
        const double rhs = x * fracalc::gamma(x);
        CHECK(std::fabs(lhs - rhs) / lhs <= 1e-12);
    }
}

TEST_CASE("gamma 12-digit accuracy against std::tgamma") {
    for (double x = 1e-3; x < 170.0; x *= 1.37) {
        CHECK(testsupport::rel_err(fracalc::gamma(x), std::tgamma(x)) < 1e-12);
    }
}

TEST_CASE("gl_weights values and sign structure") {
    CHECK(gl_weights(0.5, 0) == std::vector<double>{1.0});
    const auto w = gl_weights(0.5, 2);
    CHECK(w[0] == 1.0);
    CHECK(w[1] == doctest::Approx(-0.5));
    CHECK(w[2] == doctest::Approx(-0.125));
    CHECK_THROWS_AS(gl_weights(1.5, 4), PreconditionError);

    for (double alpha : {0.1, 0.37, 0.5, 0.9}) {
        const auto ws = gl_weights(alpha, 4000);
        CHECK(ws[0] == 1.0);
        CHECK(ws[1] == doctest::Approx(-alpha).epsilon(1e-14));
        double partial = ws[0];
        double prev_partial = 2.0;
        for (std::size_t k = 1; k < ws.size(); ++k) {
            CHECK(ws[k] < 0.0);
            partial += ws[k];
            CHECK(partial <= prev_partial);
            prev_partial = partial;
        }
        // partial sums decrease monotonically toward 0 from above at the
        // binomial-series rate K^(-alpha)
        CHECK(partial > 0.0);
        CHECK(partial < 1.5 * std::pow(4000.0, -alpha));
    }
}

TEST_CASE("lp_norm examples") {
    const Grid g = make_uniform_grid(0.0, 1.0, 2048, DomainKind::FiniteInterval);
    const SampledFunction one = sample(g, [](double) { return 1.0; });
    CHECK(lp_norm(one, 2.0) == doctest::Approx(1.0).epsilon(1e-10));

    const SampledFunction x = sample(g, [](double t) { return t; });
    CHECK(lp_norm(x, 2.0) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-6));

    const SampledFunction zero = sample(g, [](double) { return 0.0; });
    for (double p : {1.0, 2.0, 7.5}) CHECK(lp_norm(zero, p) == 0.0);
    CHECK(lp_norm(zero, kInfinityP) == 0.0);
    CHECK(lp_norm(x, kInfinityP) == doctest::Approx(1.0));

    CHECK_THROWS_AS(lp_norm(x, 0.5), PreconditionError);
}

TEST_CASE("lp_norm homogeneity and triangle inequality") {
    const Grid g = make_uniform_grid(0.0, 1.0, 257, DomainKind::FiniteInterval);
    for (unsigned seed = 1; seed <= 8; ++seed) {
        const auto va = testsupport::random_samples(g.num_nodes(), seed);
        const auto vb = testsupport::random_samples(g.num_nodes(), seed + 100);
        const SampledFunction fa(g, va), fb(g, vb);
        for (double p : {1.0, 2.0, 3.5, kInfinityP}) {
            const double c = -2.75;
            std::vector<double> scaled(va);
            for (double& v : scaled) v *= c;
            CHECK(lp_norm(SampledFunction(g, scaled), p) ==
                  doctest::Approx(std::fabs(c) * lp_norm(fa, p)).epsilon(1e-13));

            std::vector<double> sum(va);
            for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += vb[i];
            CHECK(lp_norm(SampledFunction(g, sum), p) <=
                  lp_norm(fa, p) + lp_norm(fb, p) + 1e-12);
        }
    }
}

TEST_CASE("csv and json serialization") {
    const Grid g = make_uniform_grid(0.0, 1.0, 4, DomainKind::FiniteInterval);
    const SampledFunction f(g, {0.0, 0.5, 1.0, 1.5, 2.0}, {0});
    const std::string csv = to_csv(f);
    CHECK(csv.rfind("x,value\n", 0) == 0);
    // excluded node omitted: 4 data rows
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);

    // JSON round trip preserves grid, values and exclusions exactly
    const SampledFunction back = sampled_function_from_json(to_json(f));
    CHECK(back.grid == f.grid);
    CHECK(back.values == f.values);
    CHECK(back.excluded == f.excluded);

    CHECK_THROWS_AS(sampled_function_from_json("{broken"), ConfigError);
}
