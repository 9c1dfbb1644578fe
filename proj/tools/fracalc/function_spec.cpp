#include <cmath>
#include <sstream>

#include "cli.hpp"
#include "fracalc/calculus.hpp"

namespace fracalc {
namespace cli {

double FunctionSpec::evaluate(double x, double a, double b) const {
    switch (kind) {
        case Kind::Power:
            return std::pow(x - a, p0);
        case Kind::Constant:
            return p0;
        case Kind::Step:
            return x <= 0.5 * (a + b) ? p0 : p1;
        case Kind::Bump:
            return calculus::smooth_bump(x, p0, 0.5 * p1);
        case Kind::Gaussian:
            return std::exp(-0.5 * x * x / (p0 * p0));
        case Kind::Kernel:
            return std::pow(x - a, p0 - 1.0);
        case Kind::Sum: {
            double s = 0.0;
            for (const auto& c : children) s += c.evaluate(x, a, b);
            return s;
        }
        case Kind::Scale:
            return p0 * children.at(0).evaluate(x, a, b);
    }
    throw ConfigError("unknown function kind");
}

std::set<std::size_t> FunctionSpec::excluded_nodes(const Grid& g) const {
    std::set<std::size_t> excl;
    switch (kind) {
        case Kind::Power:
            if (p0 < 0.0) excl.insert(0);
            break;
        case Kind::Kernel:
            if (p0 < 1.0) excl.insert(0);
            break;
        case Kind::Sum:
        case Kind::Scale:
            for (const auto& c : children) {
                auto sub = c.excluded_nodes(g);
                excl.insert(sub.begin(), sub.end());
            }
            break;
        default:
            break;
    }
    return excl;
}

namespace {

std::vector<double> parse_numbers(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("bad numeric parameter '" + item + "'");
        }
    }
    return out;
}

void require_params(const std::vector<double>& p, std::size_t count, const char* what) {
    if (p.size() != count)
        throw ConfigError(std::string(what) + " takes " + std::to_string(count) +
                          " parameter(s)");
}

}  // namespace

FunctionSpec FunctionSpec::parse_cli(const std::string& text) {
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
    const std::vector<double> p = parse_numbers(args);
    FunctionSpec f;
    if (name == "power") {
        require_params(p, 1, "power");
        f.kind = Kind::Power;
        f.p0 = p[0];
    } else if (name == "constant") {
        require_params(p, 1, "constant");
        f.kind = Kind::Constant;
        f.p0 = p[0];
    } else if (name == "step") {
        require_params(p, 2, "step");
        f.kind = Kind::Step;
        f.p0 = p[0];
        f.p1 = p[1];
    } else if (name == "bump") {
        require_params(p, 2, "bump");
        f.kind = Kind::Bump;
        f.p0 = p[0];
        f.p1 = p[1];
    } else if (name == "gaussian") {
        require_params(p, 1, "gaussian");
        if (!(p[0] > 0.0)) throw ConfigError("gaussian width must be positive");
        f.kind = Kind::Gaussian;
        f.p0 = p[0];
    } else if (name == "kernel") {
        require_params(p, 1, "kernel");
        f.kind = Kind::Kernel;
        f.p0 = p[0];
    } else {
        throw ConfigError("unknown function '" + name +
                          "' (power|constant|step|bump|gaussian|kernel)");
    }
    return f;
}

FunctionSpec FunctionSpec::from_json(const nlohmann::json& j) {
    try {
        const std::string kind = j.at("kind").get<std::string>();
        FunctionSpec f;
        if (kind == "power") {
            f.kind = Kind::Power;
            f.p0 = j.at("mu").get<double>();
        } else if (kind == "constant") {
            f.kind = Kind::Constant;
            f.p0 = j.at("c").get<double>();
        } else if (kind == "step") {
            f.kind = Kind::Step;
            f.p0 = j.at("lambda").get<double>();
            f.p1 = j.at("mu").get<double>();
        } else if (kind == "bump") {
            f.kind = Kind::Bump;
            f.p0 = j.at("center").get<double>();
            f.p1 = j.at("width").get<double>();
        } else if (kind == "gaussian") {
            f.kind = Kind::Gaussian;
            f.p0 = j.at("sigma").get<double>();
        } else if (kind == "kernel") {
            f.kind = Kind::Kernel;
            f.p0 = j.at("alpha").get<double>();
        } else if (kind == "sum") {
            f.kind = Kind::Sum;
            for (const auto& t : j.at("terms")) f.children.push_back(from_json(t));
        } else if (kind == "scale") {
            f.kind = Kind::Scale;
            f.p0 = j.at("factor").get<double>();
            f.children.push_back(from_json(j.at("inner")));
        } else {
            throw ConfigError("unknown function kind '" + kind + "'");
        }
        return f;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad function spec: ") + e.what());
    }
}

nlohmann::json FunctionSpec::to_json() const {
    nlohmann::json j;
    switch (kind) {
        case Kind::Power: j = {{"kind", "power"}, {"mu", p0}}; break;
        case Kind::Constant: j = {{"kind", "constant"}, {"c", p0}}; break;
        case Kind::Step: j = {{"kind", "step"}, {"lambda", p0}, {"mu", p1}}; break;
        case Kind::Bump: j = {{"kind", "bump"}, {"center", p0}, {"width", p1}}; break;
        case Kind::Gaussian: j = {{"kind", "gaussian"}, {"sigma", p0}}; break;
        case Kind::Kernel: j = {{"kind", "kernel"}, {"alpha", p0}}; break;
        case Kind::Sum: {
            j["kind"] = "sum";
            for (const auto& c : children) j["terms"].push_back(c.to_json());
            break;
        }
        case Kind::Scale:
            j = {{"kind", "scale"}, {"factor", p0}, {"inner", children.at(0).to_json()}};
            break;
    }
    return j;
}

SampledFunction realize(const FunctionSpec& spec, const Grid& g) {
    return sample(
        g, [&](double x) { return spec.evaluate(x, g.a, g.b); }, spec.excluded_nodes(g));
}

}  // namespace cli
}  // namespace fracalc
