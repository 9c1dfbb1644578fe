#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracalc/grid.hpp"
#include "fracalc/operators.hpp"

namespace fracalc {
namespace cli {

/// Closed function DSL: every expression is a tagged node, evaluable at any
/// grid point and able to declare its singular nodes. Compositions are sums
/// and scalings only; there is deliberately no expression parser.
struct FunctionSpec {
    enum class Kind { Power, Constant, Step, Bump, Gaussian, Kernel, Sum, Scale };
    Kind kind = Kind::Constant;
    double p0 = 0.0;  // mu | c | lambda | center | sigma | alpha | - | factor
    double p1 = 0.0;  // -  | - | mu     | width  | -     | -     | - | -
    std::vector<FunctionSpec> children;

    /// Evaluate relative to the domain [a,b]: power laws and the kernel
    /// function anchor at a; the step jumps at the midpoint.
    double evaluate(double x, double a, double b) const;
    /// Node indices whose value is singular on this grid.
    std::set<std::size_t> excluded_nodes(const Grid& g) const;

    static FunctionSpec parse_cli(const std::string& text);  // "power:0.5" etc.
    static FunctionSpec from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

SampledFunction realize(const FunctionSpec& spec, const Grid& g);

/// Everything a run needs; a run is reproducible from its config alone.
struct RunConfig {
    std::string command;  // compute | verify | convergence | norm
    FunctionSpec function;
    std::string op = "rl-deriv";  // compute: rl-int|rl-deriv|caputo|weak-caputo|gl|fourier
    double alpha = 0.5;
    double sigma_p = 2.0;  // L^p exponent for norm commands
    Direction direction = Direction::Left;
    double a = 0.0, b = 1.0;
    std::size_t n = 1024;
    DomainKind kind = DomainKind::FiniteInterval;
    std::string suite = "all";
    std::vector<std::size_t> ladder{256, 512, 1024, 2048, 4096};
    std::string output;           // file (compute/convergence) or directory (verify)
    std::string format = "csv";   // csv | json
    std::string norm_kind = "sobolev";  // sobolev | gagliardo | fourier
    unsigned long long seed = 2024;
    int threads = 1;  // FRACALC_THREADS cap; reference implementation is serial
    nlohmann::json tolerances;   // per-identity overrides

    nlohmann::json to_json() const;
    static RunConfig from_json(const nlohmann::json& j);
};

/// Exit codes: 0 all pass, 1 identity failure, 2 config error, 3 numerical
/// precondition failure. Never aborts on malformed input.
int run(int argc, const char* const* argv);

int cmd_compute(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg);
int cmd_convergence(const RunConfig& cfg);
int cmd_norm(const RunConfig& cfg);

}  // namespace cli
}  // namespace fracalc
