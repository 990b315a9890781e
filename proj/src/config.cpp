#include "bilat/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "bilat/expression.hpp"

namespace bilat {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        const double v = std::stod(value, &used);
        if (trim(value.substr(used)).empty()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError("key '" + key + "': expected a number, got '" + value + "'");
}

long parse_long(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        const long v = std::stol(value, &used);
        if (trim(value.substr(used)).empty()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError("key '" + key + "': expected an integer, got '" + value + "'");
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("key '" + key + "': expected a boolean, got '" + value + "'");
}

struct RawConfig {
    // section -> ordered (key, value) pairs
    std::map<std::string, std::vector<std::pair<std::string, std::string>>> sections;
};

RawConfig tokenize(const std::string& text) {
    RawConfig raw;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("line " + std::to_string(line_no) + ": malformed section");
            }
            section = trim(line.substr(1, line.size() - 2));
            raw.sections[section];
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        if (section.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": key outside any section");
        }
        raw.sections[section].emplace_back(trim(line.substr(0, eq)),
                                           trim(line.substr(eq + 1)));
    }
    return raw;
}

// coefficient keys allowed per plant class
std::vector<std::string> coefficient_names(PlantClass c) {
    switch (c) {
        case PlantClass::reaction_diffusion: return {"lambda"};
        case PlantClass::hyperbolic: return {"c1", "c2", "c3", "c4"};
        case PlantClass::wave: return {"lambda", "alpha"};
    }
    return {};
}

std::vector<std::string> initial_keys(PlantClass c) {
    switch (c) {
        case PlantClass::reaction_diffusion: return {"initial"};
        case PlantClass::hyperbolic: return {"initial_u", "initial_v"};
        case PlantClass::wave: return {"initial_displacement", "initial_velocity"};
    }
    return {};
}

}  // namespace

std::string plant_class_name(PlantClass c) {
    switch (c) {
        case PlantClass::reaction_diffusion: return "reaction-diffusion";
        case PlantClass::hyperbolic: return "hyperbolic-2x2";
        case PlantClass::wave: return "wave";
    }
    return "?";
}

PlantClass parse_plant_class(const std::string& name) {
    if (name == "reaction-diffusion" || name == "rd") return PlantClass::reaction_diffusion;
    if (name == "hyperbolic-2x2" || name == "hyperbolic" || name == "hyp") {
        return PlantClass::hyperbolic;
    }
    if (name == "wave") return PlantClass::wave;
    throw ConfigError("unknown plant class '" + name + "'");
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> read_table_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open table file '" + path + "'");
    std::vector<double> xs, vs;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double x, v;
        if (row >> x >> v) {
            xs.push_back(x);
            vs.push_back(v);
        } else if (!xs.empty()) {
            throw ConfigError("table '" + path + "': malformed row '" + line + "'");
        }
        // non-numeric first row is treated as a header
    }
    if (xs.size() < 2) throw ConfigError("table '" + path + "': need at least two rows");
    Eigen::VectorXd ex(xs.size()), ev(vs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        ex[i] = xs[i];
        ev[i] = vs[i];
    }
    return {ex, ev};
}

CoefficientProfile CoefficientSpec::build() const {
    switch (kind) {
        case Kind::constant:
            return CoefficientProfile::constant(value);
        case Kind::expression:
            return CoefficientProfile::closed_form(parse_expression(text), text);
        case Kind::table: {
            auto [xs, vs] = read_table_csv(text);
            return CoefficientProfile::tabulated(std::move(xs), std::move(vs));
        }
    }
    throw ConfigError("bad coefficient spec");
}

RunConfig RunConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_text(buffer.str());
}

RunConfig RunConfig::parse_text(const std::string& text) {
    RawConfig raw = tokenize(text);
    for (const auto& [name, _] : raw.sections) {
        if (name != "plant" && name != "solver" && name != "simulation" && name != "output") {
            throw ConfigError("unknown section [" + name + "]");
        }
    }

    RunConfig cfg;
    auto plant_it = raw.sections.find("plant");
    if (plant_it == raw.sections.end()) throw ConfigError("missing [plant] section");

    // class first; it decides the accepted keys
    std::string class_name;
    for (const auto& [key, value] : plant_it->second) {
        if (key == "class") class_name = value;
    }
    if (class_name.empty()) throw ConfigError("[plant] must set 'class'");
    cfg.plant_class = parse_plant_class(class_name);

    const std::vector<std::string> coef_names = coefficient_names(cfg.plant_class);
    std::set<std::string> seen;
    for (const auto& [key, value] : plant_it->second) {
        if (!seen.insert(key).second) throw ConfigError("duplicate key '" + key + "'");
        if (key == "class") continue;
        if (key == "epsilon") {
            if (cfg.plant_class == PlantClass::wave) {
                throw ConfigError("wave plant has unit speed; 'epsilon' is not a key");
            }
            cfg.epsilon = parse_double(key, value);
            continue;
        }
        if (key == "L") {
            cfg.half_length = parse_double(key, value);
            continue;
        }
        bool matched = false;
        for (const std::string& base : coef_names) {
            CoefficientSpec spec;
            if (key == base) {
                spec.kind = CoefficientSpec::Kind::constant;
                spec.value = parse_double(key, value);
            } else if (key == base + "_expr") {
                spec.kind = CoefficientSpec::Kind::expression;
                spec.text = value;
                parse_expression(value);  // validate now
            } else if (key == base + "_table") {
                spec.kind = CoefficientSpec::Kind::table;
                spec.text = value;
            } else {
                continue;
            }
            if (cfg.coefficients.count(base)) {
                throw ConfigError("coefficient '" + base + "' specified more than once");
            }
            cfg.coefficients[base] = spec;
            matched = true;
            break;
        }
        if (!matched) {
            throw ConfigError("unknown [plant] key '" + key + "' for class " +
                              plant_class_name(cfg.plant_class));
        }
    }
    for (const std::string& base : coef_names) {
        if (!cfg.coefficients.count(base)) {
            throw ConfigError("plant class " + plant_class_name(cfg.plant_class) +
                              " requires coefficient '" + base + "'");
        }
    }
    if (!(cfg.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (!(cfg.half_length > 0.0)) throw ConfigError("L must be positive");

    if (auto it = raw.sections.find("solver"); it != raw.sections.end()) {
        for (const auto& [key, value] : it->second) {
            if (key == "kernel_points") {
                cfg.solver.kernel_points = parse_long(key, value);
            } else if (key == "tol") {
                cfg.solver.tol = parse_double(key, value);
            } else if (key == "max_iter") {
                cfg.solver.max_iter = static_cast<int>(parse_long(key, value));
            } else if (key == "n_terms") {
                cfg.solver.n_terms = static_cast<int>(parse_long(key, value));
            } else if (key == "richardson_levels") {
                cfg.solver.richardson_levels = static_cast<int>(parse_long(key, value));
            } else {
                throw ConfigError("unknown [solver] key '" + key + "'");
            }
        }
    }
    if (cfg.solver.kernel_points % 2 == 0 || cfg.solver.kernel_points < 3) {
        throw ConfigError("kernel_points must be odd and >= 3");
    }
    if (!(cfg.solver.tol > 0.0)) throw ConfigError("tol must be positive");
    if (cfg.solver.max_iter < 1 || cfg.solver.n_terms < 1 || cfg.solver.richardson_levels < 1) {
        throw ConfigError("solver iteration counts must be positive");
    }

    const std::vector<std::string> init_keys = initial_keys(cfg.plant_class);
    if (auto it = raw.sections.find("simulation"); it != raw.sections.end()) {
        for (const auto& [key, value] : it->second) {
            if (key == "points") {
                cfg.simulation.points = parse_long(key, value);
            } else if (key == "dt") {
                cfg.simulation.dt = parse_double(key, value);
            } else if (key == "T") {
                cfg.simulation.horizon = parse_double(key, value);
            } else if (std::find(init_keys.begin(), init_keys.end(), key) != init_keys.end()) {
                parse_expression(value);  // validate now
                cfg.simulation.initial[key] = value;
            } else {
                throw ConfigError("unknown [simulation] key '" + key + "' for class " +
                                  plant_class_name(cfg.plant_class));
            }
        }
    }
    if (cfg.simulation.points % 2 == 0 || cfg.simulation.points < 3) {
        throw ConfigError("simulation points must be odd and >= 3");
    }
    if (!(cfg.simulation.horizon > 0.0)) throw ConfigError("T must be positive");
    if (cfg.simulation.dt && !(*cfg.simulation.dt > 0.0)) {
        throw ConfigError("dt must be positive");
    }

    if (auto it = raw.sections.find("output"); it != raw.sections.end()) {
        for (const auto& [key, value] : it->second) {
            if (key == "dir") {
                cfg.output.dir = value;
            } else if (key == "csv") {
                cfg.output.csv = parse_bool(key, value);
            } else if (key == "json") {
                cfg.output.json = parse_bool(key, value);
            } else if (key == "stride") {
                cfg.output.stride = static_cast<int>(parse_long(key, value));
            } else {
                throw ConfigError("unknown [output] key '" + key + "'");
            }
        }
    }
    if (cfg.output.stride < 1) throw ConfigError("stride must be >= 1");
    return cfg;
}

std::string RunConfig::canonical_text() const {
    std::ostringstream out;
    out << "[plant]\n";
    out << "class = " << plant_class_name(plant_class) << "\n";
    if (plant_class != PlantClass::wave) out << "epsilon = " << fmt17(epsilon) << "\n";
    out << "L = " << fmt17(half_length) << "\n";
    for (const auto& [name, spec] : coefficients) {
        switch (spec.kind) {
            case CoefficientSpec::Kind::constant:
                out << name << " = " << fmt17(spec.value) << "\n";
                break;
            case CoefficientSpec::Kind::expression:
                out << name << "_expr = " << spec.text << "\n";
                break;
            case CoefficientSpec::Kind::table:
                out << name << "_table = " << spec.text << "\n";
                break;
        }
    }
    out << "\n[solver]\n";
    out << "kernel_points = " << solver.kernel_points << "\n";
    out << "tol = " << fmt17(solver.tol) << "\n";
    out << "max_iter = " << solver.max_iter << "\n";
    out << "n_terms = " << solver.n_terms << "\n";
    out << "richardson_levels = " << solver.richardson_levels << "\n";
    out << "\n[simulation]\n";
    out << "points = " << simulation.points << "\n";
    if (simulation.dt) out << "dt = " << fmt17(*simulation.dt) << "\n";
    out << "T = " << fmt17(simulation.horizon) << "\n";
    for (const auto& [key, value] : simulation.initial) {
        out << key << " = " << value << "\n";
    }
    out << "\n[output]\n";
    out << "dir = " << output.dir << "\n";
    out << "csv = " << (output.csv ? "true" : "false") << "\n";
    out << "json = " << (output.json ? "true" : "false") << "\n";
    out << "stride = " << output.stride << "\n";
    return out.str();
}

CoefficientProfile RunConfig::profile(const std::string& name) const {
    auto it = coefficients.find(name);
    if (it == coefficients.end()) throw ConfigError("missing coefficient '" + name + "'");
    return it->second.build();
}

RdPlant RunConfig::rd_plant() const {
    if (plant_class != PlantClass::reaction_diffusion) {
        throw ConfigError("config is not a reaction-diffusion plant");
    }
    return RdPlant{epsilon, profile("lambda"), half_length};
}

HypPlant RunConfig::hyp_plant() const {
    if (plant_class != PlantClass::hyperbolic) {
        throw ConfigError("config is not a hyperbolic plant");
    }
    return HypPlant{epsilon, profile("c1"), profile("c2"), profile("c3"), profile("c4"),
                    half_length};
}

WavePlant RunConfig::wave_plant() const {
    if (plant_class != PlantClass::wave) throw ConfigError("config is not a wave plant");
    return WavePlant{profile("lambda"), profile("alpha"), half_length};
}

Eigen::VectorXd RunConfig::initial_profile(const std::string& key,
                                           const IntervalGrid& grid) const {
    auto it = simulation.initial.find(key);
    if (it == simulation.initial.end()) {
        throw ConfigError("[simulation] is missing '" + key + "'");
    }
    auto fn = parse_expression(it->second);
    Eigen::VectorXd out(grid.size());
    for (Eigen::Index i = 0; i < grid.size(); ++i) out[i] = fn(grid.node(i));
    return out;
}

}  // namespace bilat
