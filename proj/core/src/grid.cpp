#include "fracalc/grid.hpp"

#include <cmath>

namespace fracalc {

Grid make_uniform_grid(double a, double b, std::size_t n, DomainKind kind) {
    if (!std::isfinite(a) || !std::isfinite(b))
        throw PreconditionError("grid_nonfinite", "grid endpoints must be finite");
    if (!(a < b))
        throw PreconditionError("grid_order", "grid requires a < b");
    if (n < 2)
        throw PreconditionError("grid_too_small", "grid requires n >= 2 intervals");
    return Grid{a, b, n, kind};
}

SampledFunction::SampledFunction(Grid g, std::vector<double> vals, std::set<std::size_t> excl)
    : grid(g), values(std::move(vals)), excluded(std::move(excl)) {
    validate();
}

void SampledFunction::validate() const {
    if (values.size() != grid.num_nodes())
        throw PreconditionError("sample_size",
                                "values.size() must equal grid.n + 1");
    for (std::size_t i : excluded) {
        if (i >= values.size())
            throw PreconditionError("sample_excluded_index",
                                    "excluded node index out of range");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!is_excluded(i) && !std::isfinite(values[i]))
            throw PreconditionError("sample_nonfinite",
                                    "non-excluded sample value is not finite");
    }
}

}  // namespace fracalc
