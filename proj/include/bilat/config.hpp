#pragma once

// Run configuration: a small INI-style text format with [plant], [solver],
// [simulation] and [output] sections. The plant class decides which
// coefficient keys are required; unknown keys are rejected. Coefficients
// accept three spellings, e.g.
//   lambda = 12            (constant)
//   lambda_expr = 1 + x^2  (closed form)
//   lambda_table = l.csv   (two-column CSV, linear interpolation)

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>

#include "bilat/grid.hpp"
#include "bilat/simulate.hpp"

namespace bilat {

struct CoefficientSpec {
    enum class Kind { constant, expression, table };
    Kind kind = Kind::constant;
    double value = 0.0;
    std::string text;  // expression source or table path

    CoefficientProfile build() const;
};

struct SolverConfig {
    Eigen::Index kernel_points = 201;
    double tol = 1e-10;
    int max_iter = 200;
    int n_terms = 80;
    int richardson_levels = 3;
};

struct SimulationConfig {
    Eigen::Index points = 201;
    std::optional<double> dt;
    double horizon = 1.0;
    std::map<std::string, std::string> initial;  // expressions per initial field
};

struct OutputConfig {
    std::string dir = "out";
    bool csv = true;
    bool json = true;
    int stride = 1;
};

struct RunConfig {
    PlantClass plant_class = PlantClass::reaction_diffusion;
    double epsilon = 1.0;
    double half_length = 1.0;
    std::map<std::string, CoefficientSpec> coefficients;
    SolverConfig solver;
    SimulationConfig simulation;
    OutputConfig output;

    static RunConfig parse_file(const std::string& path);
    static RunConfig parse_text(const std::string& text);

    /// Fixed-order serialization; parse_text(canonical_text()) reproduces
    /// the configuration exactly.
    std::string canonical_text() const;

    CoefficientProfile profile(const std::string& name) const;
    RdPlant rd_plant() const;
    HypPlant hyp_plant() const;
    WavePlant wave_plant() const;

    /// Initial-condition expression sampled on a grid; throws ConfigError
    /// when the key is missing.
    Eigen::VectorXd initial_profile(const std::string& key, const IntervalGrid& grid) const;
};

std::string plant_class_name(PlantClass c);
PlantClass parse_plant_class(const std::string& name);

/// Two-column CSV (x, value), header row optional.
std::pair<Eigen::VectorXd, Eigen::VectorXd> read_table_csv(const std::string& path);

}  // namespace bilat
