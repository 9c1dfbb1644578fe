#pragma once

#include <string>

#include "fracalc/grid.hpp"
#include "fracalc/operators.hpp"

namespace fracalc {

/// CSV: header "x,value", one row per non-excluded node, %.17g floats so a
/// rerun of the same config is byte-identical.
std::string to_csv(const SampledFunction& f);
std::string to_csv(const OperatorResult& r);

/// JSON: {grid:{a,b,n,kind}, values:[...], excluded:[...]}; OperatorResult
/// adds a "scheme" field.
std::string to_json(const SampledFunction& f);
std::string to_json(const OperatorResult& r);

SampledFunction sampled_function_from_json(const std::string& text);

/// Writes atomically (temp file + rename in the target directory).
void write_file_atomic(const std::string& path, const std::string& contents);

std::string format_double(double v);

}  // namespace fracalc
