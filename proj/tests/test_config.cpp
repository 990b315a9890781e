#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "bilat/config.hpp"
#include "bilat/expression.hpp"

using namespace bilat;

TEST_CASE("expression parser") {
    CHECK(parse_expression("1 + 2*3")(0.0) == 7.0);
    CHECK(parse_expression("2^3^2")(0.0) == 512.0);  // right associative
    CHECK(parse_expression("-x^2")(3.0) == -9.0);
    CHECK(parse_expression("cos(pi*x/2)")(1.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(parse_expression("exp(-4*x^2)")(0.5) == doctest::Approx(std::exp(-1.0)));
    CHECK(parse_expression("sin(x)/x")(1e-1) == doctest::Approx(std::sin(0.1) / 0.1));
    CHECK(parse_expression("1.5e-3")(0.0) == 1.5e-3);
    CHECK(evaluate_constant_expression("(1+2)/4") == 0.75);
    CHECK_THROWS_AS(parse_expression("1 +"), ConfigError);
    CHECK_THROWS_AS(parse_expression("foo(2)"), ConfigError);
    CHECK_THROWS_AS(parse_expression("sin 2"), ConfigError);
    CHECK_THROWS_AS(parse_expression("(1"), ConfigError);
    CHECK_THROWS_AS(parse_expression("1 2"), ConfigError);
}

namespace {

const char* kRdConfig = R"(
# reaction-diffusion demo
[plant]
class = reaction-diffusion
epsilon = 1.0
L = 1.0
lambda = 12

[solver]
kernel_points = 101
tol = 1e-10
max_iter = 200

[simulation]
points = 101
dt = 0.002
T = 1.5
initial = cos(pi*x/2)

[output]
dir = out
stride = 10
)";

}  // namespace

TEST_CASE("config parsing") {
    RunConfig cfg = RunConfig::parse_text(kRdConfig);
    CHECK(cfg.plant_class == PlantClass::reaction_diffusion);
    CHECK(cfg.epsilon == 1.0);
    CHECK(cfg.half_length == 1.0);
    CHECK(cfg.coefficients.at("lambda").value == 12.0);
    CHECK(cfg.solver.kernel_points == 101);
    CHECK(cfg.simulation.dt == 0.002);
    CHECK(cfg.simulation.horizon == 1.5);
    CHECK(cfg.output.stride == 10);

    RdPlant plant = cfg.rd_plant();
    CHECK(plant.lambda.constant_value() == 12.0);

    IntervalGrid grid(cfg.half_length, 5);
    Eigen::VectorXd init = cfg.initial_profile("initial", grid);
    CHECK(init[2] == doctest::Approx(1.0));  // cos(0)
}

TEST_CASE("config validation") {
    SUBCASE("unknown keys rejected") {
        CHECK_THROWS_AS(RunConfig::parse_text("[plant]\nclass = rd\nL = 1\nlambda = 1\n"
                                              "mystery = 2\n"),
                        ConfigError);
        CHECK_THROWS_AS(RunConfig::parse_text("[plant]\nclass = rd\nL = 1\nlambda = 1\n"
                                              "[solver]\nwat = 1\n"),
                        ConfigError);
        CHECK_THROWS_AS(RunConfig::parse_text("[nonsense]\nx = 1\n"), ConfigError);
    }
    SUBCASE("class-dependent keys") {
        // c1 belongs to the hyperbolic class only
        CHECK_THROWS_AS(RunConfig::parse_text("[plant]\nclass = rd\nL = 1\nlambda = 1\nc1 = 0\n"),
                        ConfigError);
        // wave has no epsilon
        CHECK_THROWS_AS(
            RunConfig::parse_text("[plant]\nclass = wave\nL = 1\nlambda = 1\nalpha = 0\n"
                                  "epsilon = 2\n"),
            ConfigError);
        // missing coefficient
        CHECK_THROWS_AS(RunConfig::parse_text("[plant]\nclass = hyperbolic\nL = 1\nc1 = 0\n"),
                        ConfigError);
    }
    SUBCASE("grid sizes must be odd") {
        CHECK_THROWS_AS(RunConfig::parse_text("[plant]\nclass = rd\nL = 1\nlambda = 1\n"
                                              "[solver]\nkernel_points = 100\n"),
                        ConfigError);
        CHECK_THROWS_AS(RunConfig::parse_text("[plant]\nclass = rd\nL = 1\nlambda = 1\n"
                                              "[simulation]\npoints = 42\n"),
                        ConfigError);
    }
    SUBCASE("tolerances positive") {
        CHECK_THROWS_AS(RunConfig::parse_text("[plant]\nclass = rd\nL = 1\nlambda = 1\n"
                                              "[solver]\ntol = 0\n"),
                        ConfigError);
        CHECK_THROWS_AS(RunConfig::parse_text("[plant]\nclass = rd\nL = 1\nlambda = 1\n"
                                              "[simulation]\ndt = -0.1\n"),
                        ConfigError);
    }
    SUBCASE("duplicate and conflicting coefficient spellings") {
        CHECK_THROWS_AS(RunConfig::parse_text("[plant]\nclass = rd\nL = 1\nlambda = 1\n"
                                              "lambda_expr = 1 + x\n"),
                        ConfigError);
    }
    SUBCASE("expression keys are validated at parse time") {
        CHECK_THROWS_AS(RunConfig::parse_text("[plant]\nclass = rd\nL = 1\n"
                                              "lambda_expr = 1 +\n"),
                        ConfigError);
    }
}

TEST_CASE("canonical text round trip") {
    RunConfig cfg = RunConfig::parse_text(kRdConfig);
    const std::string canon = cfg.canonical_text();
    RunConfig back = RunConfig::parse_text(canon);
    CHECK(back.canonical_text() == canon);
    CHECK(back.plant_class == cfg.plant_class);
    CHECK(back.coefficients.at("lambda").value == 12.0);
    CHECK(back.simulation.initial.at("initial") == "cos(pi*x/2)");
}

TEST_CASE("expression coefficients build into profiles") {
    RunConfig cfg = RunConfig::parse_text(
        "[plant]\nclass = wave\nL = 1\nlambda_expr = 0.5 + 0.1*x\nalpha = 0\n"
        "[simulation]\ninitial_displacement = 0\ninitial_velocity = 0\n");
    WavePlant plant = cfg.wave_plant();
    CHECK(plant.lambda(0.5) == doctest::Approx(0.55));
    CHECK(plant.alpha.is_constant());
}

TEST_CASE("tabulated coefficients load from csv") {
    namespace fs = std::filesystem;
    const fs::path table = fs::temp_directory_path() / "bilat_lambda_table.csv";
    {
        std::ofstream out(table);
        out << "x,value\n-1,2\n0,0\n1,4\n";
    }
    RunConfig cfg = RunConfig::parse_text("[plant]\nclass = rd\nL = 1\nlambda_table = " +
                                          table.string() + "\n");
    RdPlant plant = cfg.rd_plant();
    CHECK(plant.lambda(-0.5) == doctest::Approx(1.0));
    CHECK(plant.lambda(0.5) == doctest::Approx(2.0));
    CHECK_FALSE(plant.lambda.is_constant());
    // canonical text keeps the table reference
    RunConfig back = RunConfig::parse_text(cfg.canonical_text());
    CHECK(back.coefficients.at("lambda").kind == CoefficientSpec::Kind::table);
    fs::remove(table);
}

TEST_CASE("hyperbolic config") {
    RunConfig cfg = RunConfig::parse_text(
        "[plant]\nclass = hyperbolic-2x2\nepsilon = 1\nL = 1\n"
        "c1 = 0\nc2 = 1\nc3 = 1\nc4 = 0\n"
        "[simulation]\ninitial_u = exp(-4*x^2)\ninitial_v = exp(-4*x^2)\n");
    HypPlant plant = cfg.hyp_plant();
    CHECK(plant.c2.constant_value() == 1.0);
    CHECK_THROWS_AS(cfg.rd_plant(), ConfigError);
}
