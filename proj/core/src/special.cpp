#include "fracalc/special.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "fracalc/grid.hpp"

namespace fracalc {

namespace {

// Lanczos g = 7, 9 coefficients.
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

// Largest x with Gamma(x) representable in double.
constexpr double kOverflowThreshold = 171.624;

// Valid for x >= 0.5. t^(z+0.5) alone overflows from x ~ 143 even though
// the product with exp(-t) is representable, so the power is split in two.
double lanczos_gamma_pos(double x) {
    const double z = x - 1.0;
    double s = kLanczos[0];
    for (int i = 1; i < 9; ++i) s += kLanczos[i] / (z + static_cast<double>(i));
    const double t = z + kLanczosG + 0.5;
    const double half_pow = std::pow(t, 0.5 * (z + 0.5));
    const double sqrt_two_pi = 2.5066282746310005;
    return sqrt_two_pi * s * half_pow * (half_pow * std::exp(-t));
}

bool is_nonpositive_integer(double x) {
    return x <= 0.0 && x == std::floor(x);
}

}  // namespace

double sin_pi(double x) {
    const double r = x - std::floor(x);
    if (r == 0.0) return 0.0;
    // sin is computed on the reduced argument in [0,1) for accuracy near
    // integer x; the half-period symmetry keeps the argument small.
    if (r <= 0.5) return std::sin(M_PI * r);
    return std::sin(M_PI * (1.0 - r));
}

double gamma(double x) {
    if (std::isnan(x)) throw PreconditionError("gamma_nan", "gamma of NaN");
    if (is_nonpositive_integer(x))
        throw PreconditionError("gamma_pole",
                                "gamma pole at non-positive integer; use reciprocal_gamma");
    if (x > kOverflowThreshold)
        throw PreconditionError("gamma_overflow",
                                "gamma(x) overflows double for x > 171.624");
    if (x >= 0.5) return lanczos_gamma_pos(x);
    // Reflection: Gamma(x) = pi / (sin(pi x) Gamma(1-x)).
    const double s = sin_pi(x);
    // sign of sin(pi x) on (k, k+1): positive for even floor(x)
    const double sign = (static_cast<long long>(std::floor(x)) % 2 == 0) ? 1.0 : -1.0;
    return M_PI / (sign * s * lanczos_gamma_pos(1.0 - x));
}

double reciprocal_gamma(double x) {
    if (is_nonpositive_integer(x)) return 0.0;
    if (x > kOverflowThreshold) return 0.0;  // 1/Gamma underflows
    return 1.0 / gamma(x);
}

double log_abs_gamma(double x) {
    if (is_nonpositive_integer(x))
        throw PreconditionError("gamma_pole", "log gamma pole at non-positive integer");
    if (x >= 0.5) {
        const double z = x - 1.0;
        double s = kLanczos[0];
        for (int i = 1; i < 9; ++i) s += kLanczos[i] / (z + static_cast<double>(i));
        const double t = z + kLanczosG + 0.5;
        return 0.5 * std::log(2.0 * M_PI) + (z + 0.5) * std::log(t) - t + std::log(s);
    }
    const double s = std::fabs(sin_pi(x));
    return std::log(M_PI) - std::log(s) - log_abs_gamma(1.0 - x);
}

std::vector<double> gl_weights(double alpha, std::size_t k_max) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw PreconditionError("gl_alpha_range", "GL requires 0<alpha<1");
    std::vector<double> w(k_max + 1);
    w[0] = 1.0;
    for (std::size_t k = 1; k <= k_max; ++k)
        w[k] = w[k - 1] * (static_cast<double>(k) - 1.0 - alpha) / static_cast<double>(k);
    return w;
}

const GaussRule& gauss_legendre_01(std::size_t order) {
    static std::mutex mu;
    static std::map<std::size_t, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it != cache.end()) return it->second;

    GaussRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const std::size_t m = (order + 1) / 2;
    for (std::size_t i = 0; i < m; ++i) {
        // Chebyshev-based initial guess on [-1,1], then Newton.
        double x = std::cos(M_PI * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(order) + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (std::size_t j = 0; j < order; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - static_cast<double>(j) * p2) /
                     (static_cast<double>(j) + 1.0);
            }
            pp = static_cast<double>(order) * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.nodes[i] = 0.5 * (1.0 - x);
        rule.weights[i] = 0.5 * w;
        rule.nodes[order - 1 - i] = 0.5 * (1.0 + x);
        rule.weights[order - 1 - i] = 0.5 * w;
    }
    auto [pos, inserted] = cache.emplace(order, std::move(rule));
    (void)inserted;
    return pos->second;
}

}  // namespace fracalc
