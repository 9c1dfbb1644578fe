#include "fracalc/serialize.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace fracalc {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string to_csv(const SampledFunction& f) {
    std::string out = "x,value\n";
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f.is_excluded(i)) continue;
        out += format_double(f.grid.node(i));
        out += ',';
        out += format_double(f.values[i]);
        out += '\n';
    }
    return out;
}

std::string to_csv(const OperatorResult& r) { return to_csv(r.output); }

namespace {

json grid_to_json(const Grid& g) {
    return json{{"a", g.a},
                {"b", g.b},
                {"n", g.n},
                {"kind", g.kind == DomainKind::FiniteInterval ? "finite-interval"
                                                              : "truncated-line"}};
}

json body_to_json(const SampledFunction& f) {
    json j;
    j["grid"] = grid_to_json(f.grid);
    j["values"] = f.values;
    j["excluded"] = std::vector<std::size_t>(f.excluded.begin(), f.excluded.end());
    return j;
}

}  // namespace

std::string to_json(const SampledFunction& f) { return body_to_json(f).dump(2) + "\n"; }

std::string to_json(const OperatorResult& r) {
    json j = body_to_json(r.output);
    j["scheme"] = to_string(r.scheme);
    if (r.estimated_order) j["estimated_order"] = *r.estimated_order;
    return j.dump(2) + "\n";
}

SampledFunction sampled_function_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    try {
        const auto& jg = j.at("grid");
        const std::string kind = jg.at("kind").get<std::string>();
        Grid g = make_uniform_grid(jg.at("a").get<double>(), jg.at("b").get<double>(),
                                   jg.at("n").get<std::size_t>(),
                                   kind == "truncated-line" ? DomainKind::TruncatedLine
                                                            : DomainKind::FiniteInterval);
        std::vector<double> values = j.at("values").get<std::vector<double>>();
        std::set<std::size_t> excl;
        if (j.contains("excluded"))
            for (const auto& e : j.at("excluded")) excl.insert(e.get<std::size_t>());
        return SampledFunction(g, std::move(values), std::move(excl));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad sampled-function JSON: ") + e.what());
    }
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path dir = target.has_parent_path() ? target.parent_path() : fs::path(".");
    fs::create_directories(dir);
    const fs::path tmp = dir / (target.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out << contents;
        if (!out) throw Error("short write to " + tmp.string());
    }
    fs::rename(tmp, target);
}

}  // namespace fracalc
