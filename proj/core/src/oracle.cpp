#include "fracalc/oracle.hpp"

#include <cmath>

#include <json.hpp>

#include "fracalc/special.hpp"

namespace fracalc {
namespace oracle {

namespace {

double dist_from_anchor(double x, Direction dir, double a, double b) {
    return (dir == Direction::Left) ? (x - a) : (b - x);
}

void require_mu(double mu) {
    if (!(mu > -1.0))
        throw PreconditionError("oracle_mu_range", "power law requires mu > -1");
}

}  // namespace

double power_law_derivative_coeff(double mu, double alpha) {
    require_mu(mu);
    return gamma(mu + 1.0) * reciprocal_gamma(mu + 1.0 - alpha);
}

std::function<double(double)> power_law_derivative(double mu, double alpha, Direction dir,
                                                   double a, double b) {
    const double coeff = power_law_derivative_coeff(mu, alpha);
    const double expo = mu - alpha;
    return [=](double x) {
        if (coeff == 0.0) return 0.0;
        const double d = dist_from_anchor(x, dir, a, b);
        return coeff * std::pow(d, expo);
    };
}

double power_law_integral_coeff(double mu, double sigma) {
    require_mu(mu);
    if (!(sigma > 0.0))
        throw PreconditionError("oracle_sigma_range", "integral order must be positive");
    return gamma(mu + 1.0) * reciprocal_gamma(mu + 1.0 + sigma);
}

std::function<double(double)> power_law_integral(double mu, double sigma, Direction dir,
                                                 double a, double b) {
    const double coeff = power_law_integral_coeff(mu, sigma);
    const double expo = mu + sigma;
    return [=](double x) {
        const double d = dist_from_anchor(x, dir, a, b);
        return coeff * std::pow(d, expo);
    };
}

std::function<double(double)> step_weak_derivative(double lambda, double mu, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw PreconditionError("alpha_range", "step formula requires 0<alpha<1");
    const double inv_gamma = reciprocal_gamma(1.0 - alpha);
    return [=](double x) {
        const double base = lambda * std::pow(x + 1.0, -alpha);
        if (x <= 0.0) return inv_gamma * base;
        return inv_gamma * (base + (mu - lambda) * std::pow(x, -alpha));
    };
}

std::optional<double> reference(const OracleCase& c, Query q, double point, double order) {
    if (point < c.a || point > c.b)
        throw PreconditionError("oracle_point_range", "query point outside the case domain");
    auto param = [&](const char* name) {
        auto it = c.params.find(name);
        if (it == c.params.end())
            throw PreconditionError("oracle_params",
                                    std::string("missing oracle parameter ") + name);
        return it->second;
    };

    switch (c.kind) {
        case CaseKind::PowerLaw: {
            const double mu = param("mu");
            const double d = dist_from_anchor(point, c.direction, c.a, c.b);
            if (q == Query::Value) return std::pow(d, mu);
            if (q == Query::RLIntegral)
                return power_law_integral(mu, order, c.direction, c.a, c.b)(point);
            return power_law_derivative(mu, order, c.direction, c.a, c.b)(point);
        }
        case CaseKind::Constant: {
            const double cv = param("c");
            if (q == Query::Value) return cv;
            if (q == Query::RLIntegral)
                return cv * power_law_integral(0.0, order, c.direction, c.a, c.b)(point);
            return cv * power_law_derivative(0.0, order, c.direction, c.a, c.b)(point);
        }
        case CaseKind::StepFunction: {
            const double lambda = param("lambda");
            const double mu = param("mu");
            if (q == Query::Value) return point <= 0.0 ? lambda : mu;
            if (q == Query::RLDerivative && c.direction == Direction::Left)
                return step_weak_derivative(lambda, mu, order)(point);
            return std::nullopt;
        }
        case CaseKind::KernelFunction: {
            const double ka = param("alpha");
            const double d = dist_from_anchor(point, c.direction, c.a, c.b);
            if (q == Query::Value) return std::pow(d, ka - 1.0);
            if (q == Query::RLDerivative && order == ka) return 0.0;
            if (q == Query::RLDerivative)
                return power_law_derivative(ka - 1.0, order, c.direction, c.a, c.b)(point);
            return power_law_integral(ka - 1.0, order, c.direction, c.a, c.b)(point);
        }
        case CaseKind::GaussianLine: {
            const double s = param("sigma");
            if (q == Query::Value) return std::exp(-0.5 * point * point / (s * s));
            return std::nullopt;  // no closed form
        }
    }
    throw PreconditionError("oracle_case", "unknown oracle case kind");
}

SampledFunction sample_case(const OracleCase& c, const Grid& g) {
    std::set<std::size_t> excl;
    // Mask nodes where the case's plain value is singular.
    if (c.kind == CaseKind::KernelFunction ||
        (c.kind == CaseKind::PowerLaw && c.params.count("mu") &&
         c.params.at("mu") < 0.0)) {
        excl.insert(c.direction == Direction::Left ? 0 : g.n);
    }
    return sample(g, [&](double x) { return *reference(c, Query::Value, x, 0.0); }, excl);
}

std::string catalog_json() {
    nlohmann::json j = nlohmann::json::array();
    j.push_back({{"case", "power-law"},
                 {"value", "dist^mu, dist = x-a (left) or b-x (right)"},
                 {"rl_integral", "Gamma(mu+1)/Gamma(mu+1+sigma) * dist^(mu+sigma)"},
                 {"rl_derivative", "Gamma(mu+1)/Gamma(mu+1-alpha) * dist^(mu-alpha)"},
                 {"validity", "mu > -1; derivative vanishes identically at mu = alpha-1"}});
    j.push_back({{"case", "constant"},
                 {"value", "c"},
                 {"rl_integral", "c * dist^sigma / (sigma Gamma(sigma))"},
                 {"rl_derivative", "c * dist^(-alpha) / Gamma(1-alpha)"},
                 {"validity", "everywhere on (a,b)"}});
    j.push_back({{"case", "step-function"},
                 {"value", "lambda on (-1,0], mu on (0,1)"},
                 {"rl_derivative",
                  "[lambda (x+1)^-alpha + (x>0) (mu-lambda) x^-alpha] / Gamma(1-alpha)"},
                 {"validity", "left direction on (-1,1); weak-sense derivative"}});
    j.push_back({{"case", "kernel-function"},
                 {"value", "dist^(alpha-1)"},
                 {"rl_derivative", "0 at matching order alpha (null space)"},
                 {"validity", "singular at the anchored endpoint; that node is masked"}});
    j.push_back({{"case", "gaussian-line"},
                 {"value", "exp(-x^2 / (2 sigma^2))"},
                 {"rl_derivative", "no closed form"},
                 {"validity", "truncated-line cases; decay makes truncation safe"}});
    return j.dump(2) + "\n";
}

}  // namespace oracle
}  // namespace fracalc
