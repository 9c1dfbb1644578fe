#pragma once

#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracalc {

/// Error hierarchy. The CLI maps these onto its exit-code contract:
/// ConfigError -> 2, PreconditionError (and subclasses) -> 3.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// A violated numerical precondition. `code()` is a stable machine-readable
/// tag (e.g. "alpha_p_ge_1") so tests and tools do not have to parse
/// human-oriented messages.
class PreconditionError : public Error {
public:
    PreconditionError(std::string code, const std::string& msg)
        : Error(msg), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

class TruncationUnsafeError : public PreconditionError {
public:
    explicit TruncationUnsafeError(const std::string& msg)
        : PreconditionError("truncation_unsafe", msg) {}
};

enum class DomainKind { FiniteInterval, TruncatedLine };

/// Uniform 1-D grid on [a,b] with n cells (n+1 nodes). A TruncatedLine grid
/// represents a window of the real line; operators acting on it must verify
/// decay of the input near the window ends (see operators.hpp).
struct Grid {
    double a = 0.0;
    double b = 1.0;
    std::size_t n = 2;
    DomainKind kind = DomainKind::FiniteInterval;

    double spacing() const { return (b - a) / static_cast<double>(n); }
    double node(std::size_t i) const { return a + static_cast<double>(i) * spacing(); }
    std::size_t num_nodes() const { return n + 1; }

    bool operator==(const Grid& other) const {
        return a == other.a && b == other.b && n == other.n && kind == other.kind;
    }
};

Grid make_uniform_grid(double a, double b, std::size_t n, DomainKind kind);

/// Real samples on a grid. Nodes where the underlying function is singular
/// or undefined are listed in `excluded` and carry no meaningful value;
/// norms and residuals skip them. All non-excluded values must be finite.
struct SampledFunction {
    Grid grid;
    std::vector<double> values;
    std::set<std::size_t> excluded;

    SampledFunction() = default;
    SampledFunction(Grid g, std::vector<double> vals, std::set<std::size_t> excl = {});

    bool is_excluded(std::size_t i) const { return excluded.count(i) != 0; }
    std::size_t size() const { return values.size(); }

    /// Throws unless sizes match, excluded indices are valid and every
    /// non-excluded value is finite.
    void validate() const;
};

/// Samples `fn` at every grid node. Indices in `excluded` are masked and
/// never evaluated (the convention for singular endpoints).
template <typename Fn>
SampledFunction sample(const Grid& g, Fn&& fn, std::set<std::size_t> excluded = {}) {
    std::vector<double> vals(g.num_nodes(), 0.0);
    for (std::size_t i = 0; i < g.num_nodes(); ++i) {
        if (excluded.count(i) == 0) vals[i] = fn(g.node(i));
    }
    return SampledFunction(g, std::move(vals), std::move(excluded));
}

}  // namespace fracalc
