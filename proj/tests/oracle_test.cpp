#include <doctest.h>

#include <cmath>

#include <json.hpp>

#include "fracalc/oracle.hpp"
#include "fracalc/special.hpp"
#include "test_support.hpp"

using namespace fracalc;
using namespace fracalc::oracle;

// The Gamma-ratio formulas cover every exponent mu > -1; before anything
// else trusts them, pin them against the substitution-quadrature oracle
// that never touches the ratio.
TEST_CASE("power-law integral formula against brute-force quadrature") {
    for (double mu : {-0.5, -0.25, 0.0, 0.3, 0.5, 1.0, 2.0}) {
        for (double sigma : {0.25, 0.5, 0.7, 1.0, 1.5}) {
            const auto closed = power_law_integral(mu, sigma, Direction::Left, 0.0, 1.0);
            for (double x : {0.2, 0.5, 1.0}) {
                const double brute = testsupport::brute_rl_integral_power(mu, sigma, 0.0, x);
                CHECK(testsupport::rel_err(closed(x), brute) < 1e-10);
            }
        }
    }
}

TEST_CASE("power-law derivative formula against brute-force differentiation") {
    for (double mu : {-0.3, 0.0, 0.5, 1.0, 2.0}) {
        for (double alpha : {0.25, 0.5, 0.75}) {
            if (std::fabs(mu - (alpha - 1.0)) < 1e-12) continue;
            const auto closed = power_law_derivative(mu, alpha, Direction::Left, 0.0, 2.0);
            for (double x : {0.5, 1.0, 1.6}) {
                const double brute = testsupport::brute_rl_derivative_power(mu, alpha, 0.0, x);
                CHECK(testsupport::rel_err(closed(x), brute) < 1e-6);
            }
        }
    }
}

TEST_CASE("kernel exponent annihilates") {
    for (double alpha : {0.25, 0.5, 0.75}) {
        const auto d = power_law_derivative(alpha - 1.0, alpha, Direction::Left, 0.0, 1.0);
        CHECK(d(0.3) == 0.0);
        CHECK(d(0.9) == 0.0);
    }
}

TEST_CASE("paper constant-derivative value") {
    // D^0.5 of 1 at dist d is d^-0.5 / Gamma(0.5)
    const auto d = power_law_derivative(0.0, 0.5, Direction::Left, 0.0, 1.0);
    CHECK(d(0.25) == doctest::Approx(2.0 / std::sqrt(M_PI)).epsilon(1e-12));
    // mu = 0.5, alpha = 0.5: constant Gamma(1.5)
    const auto c = power_law_derivative(0.5, 0.5, Direction::Left, 0.0, 1.0);
    CHECK(c(0.7) == doctest::Approx(0.8862269255).epsilon(1e-9));
}

TEST_CASE("semigroup of integrals as Gamma ratios") {
    for (double mu : {0.0, 0.5, 1.0}) {
        for (double s1 : {0.3, 0.6}) {
            for (double s2 : {0.2, 0.9}) {
                const double two_step = power_law_integral_coeff(mu, s1) *
                                        power_law_integral_coeff(mu + s1, s2);
                const double one_step = power_law_integral_coeff(mu, s1 + s2);
                CHECK(two_step == doctest::Approx(one_step).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("derivative undoes integral on the coefficients") {
    for (double mu : {0.0, 0.5, 1.3}) {
        for (double sigma : {0.25, 0.5, 0.75}) {
            const double down = power_law_integral_coeff(mu, sigma) *
                                power_law_derivative_coeff(mu + sigma, sigma);
            CHECK(down == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("alpha -> 1 consistency with ordinary differentiation") {
    const double alpha = 1.0 - 1e-6;
    for (double mu : {0.5, 1.0, 2.0, 3.3}) {
        const double c = power_law_derivative_coeff(mu, alpha);
        CHECK(testsupport::rel_err(c, mu) < 1e-4);  // d/dx x^mu = mu x^(mu-1)
    }
    // sigma -> 1 on the integral side recovers the classical antiderivative
    const double ci = power_law_integral_coeff(1.0, 1.0);
    CHECK(ci == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("step-function weak-derivative formula") {
    const auto f = step_weak_derivative(0.0, 1.0, 0.5);
    CHECK(f(0.25) == doctest::Approx(1.1283791671).epsilon(1e-9));
    // no jump degenerates to the constant formula
    const auto g = step_weak_derivative(2.0, 2.0, 0.5);
    const double x = 0.4;
    CHECK(g(x) == doctest::Approx(2.0 * std::pow(x + 1.0, -0.5) *
                                  reciprocal_gamma(0.5)));
}

TEST_CASE("reference dispatch") {
    OracleCase constant{CaseKind::Constant, {{"c", 2.0}}, 0.0, 1.0, Direction::Left};
    const auto v = reference(constant, Query::RLDerivative, 0.5, 0.5);
    REQUIRE(v.has_value());
    CHECK(*v == doctest::Approx(2.0 * std::pow(0.5, -0.5) / std::sqrt(M_PI)).epsilon(1e-12));
    CHECK(*v == doctest::Approx(1.5957691216).epsilon(1e-9));

    OracleCase kernel{CaseKind::KernelFunction, {{"alpha", 0.3}}, 0.0, 1.0, Direction::Left};
    CHECK(*reference(kernel, Query::RLDerivative, 0.77, 0.3) == 0.0);

    OracleCase gauss{CaseKind::GaussianLine, {{"sigma", 1.0}}, -8.0, 8.0, Direction::Left};
    CHECK_FALSE(reference(gauss, Query::RLDerivative, 0.5, 0.5).has_value());
    CHECK(reference(gauss, Query::Value, 0.0, 0.0).has_value());

    CHECK_THROWS_AS(reference(constant, Query::Value, 7.0, 0.5), PreconditionError);
}

TEST_CASE("catalog dumps parseable JSON") {
    const auto parsed = nlohmann::json::parse(catalog_json());
    CHECK(parsed.is_array());
    CHECK(parsed.size() == 5);
    CHECK(parsed[0].contains("validity"));
}
