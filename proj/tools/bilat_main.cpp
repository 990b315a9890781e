// Command-line driver: kernel synthesis, closed/open-loop simulation with
// target verification, and the unilateral/bilateral effort comparison.
//
// Exit codes: 0 success, 2 configuration error, 3 convergence or bracketing
// failure, 4 simulation divergence.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "bilat/config.hpp"
#include "bilat/effort.hpp"
#include "bilat/io.hpp"

namespace fs = std::filesystem;
using namespace bilat;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitConvergence = 3;
constexpr int kExitDivergence = 4;

struct KernelArgs {
    std::string config_path;
    std::string class_override;
    std::string method = "auto";  // auto | explicit | numeric
    std::string out_override;
};

struct SimulateArgs {
    std::string config_path;
    bool open_loop = false;
    bool target_check = false;
    std::string method = "auto";
    std::string out_override;
};

struct CompareArgs {
    double delta_min = 0.5;
    double delta_max = 5.0;
    int samples = 10;
    double tol = 1e-8;
    std::string out_dir = "out";
};

std::string out_dir(const RunConfig& cfg, const std::string& override_dir) {
    const std::string dir = override_dir.empty() ? cfg.output.dir : override_dir;
    fs::create_directories(dir);
    return dir;
}

bool use_explicit_path(const RunConfig& cfg, const std::string& method) {
    auto all_constant = [&](std::initializer_list<const char*> names) {
        for (const char* n : names) {
            if (cfg.coefficients.at(n).kind != CoefficientSpec::Kind::constant) return false;
        }
        return true;
    };
    bool constant = false;
    switch (cfg.plant_class) {
        case PlantClass::reaction_diffusion: constant = all_constant({"lambda"}); break;
        case PlantClass::hyperbolic: constant = all_constant({"c1", "c2", "c3", "c4"}); break;
        case PlantClass::wave: constant = all_constant({"lambda", "alpha"}); break;
    }
    if (method == "explicit") {
        if (!constant) {
            throw ConfigError("--method explicit requires constant coefficients");
        }
        return true;
    }
    if (method == "numeric") return false;
    if (method == "auto") return constant;
    throw ConfigError("unknown --method '" + method + "'");
}

RunConfig load_config(const std::string& path, const std::string& class_override) {
    RunConfig cfg = RunConfig::parse_file(path);
    if (!class_override.empty() &&
        parse_plant_class(class_override) != cfg.plant_class) {
        throw ConfigError("--class does not match the config file");
    }
    return cfg;
}

struct SynthesizedKernels {
    std::optional<RdKernel> rd;
    std::optional<HypKernel> hyp;
    std::optional<SeriesTermLedger> ledger;
    KernelProvenance provenance = KernelProvenance::explicit_form;
    HypPlant hyp_plant{1.0,
                       CoefficientProfile::constant(0.0),
                       CoefficientProfile::constant(0.0),
                       CoefficientProfile::constant(0.0),
                       CoefficientProfile::constant(0.0),
                       1.0};
    double boundary_residual = 0.0;
    double pde_residual = 0.0;
};

SynthesizedKernels synthesize(const RunConfig& cfg, bool explicit_path) {
    SynthesizedKernels out;
    const HourglassGrid grid{IntervalGrid(cfg.half_length, cfg.solver.kernel_points)};
    if (cfg.plant_class == PlantClass::reaction_diffusion) {
        const RdPlant plant = cfg.rd_plant();
        if (explicit_path) {
            out.rd = rd_kernel_explicit(plant, grid);
        } else {
            GoursatOptions gopts{cfg.solver.tol, cfg.solver.max_iter,
                                 cfg.solver.richardson_levels};
            out.rd = rd_kernel_goursat(plant, grid, gopts);
        }
        out.provenance = out.rd->provenance;
        out.pde_residual = rd_kernel_residual_sup(*out.rd, plant);
        // boundary conditions: diagonal data and antidiagonal zero
        double worst = 0.0;
        const Eigen::Index n = grid.size();
        const Eigen::Index m = grid.base().mid();
        for (Eigen::Index i = 0; i < n; ++i) {
            const double x = grid.base().node(i);
            // diagonal target -(1/(2 eps)) S_0^x lambda via fine trapezoid
            const int q = 64;
            double acc = 0.0;
            for (int s = 0; s < q; ++s) {
                const double a = x * s / q, b = x * (s + 1) / q;
                acc += (b - a) * 0.5 * (plant.lambda(a) + plant.lambda(b));
            }
            const double target = -acc / (2.0 * plant.epsilon);
            worst = std::max(worst, std::abs(out.rd->field.values(i, i) - target));
            worst = std::max(worst, std::abs(out.rd->field.values(i, 2 * m - i)));
        }
        out.boundary_residual = worst;
    } else {
        const HypPlant plant = cfg.plant_class == PlantClass::hyperbolic
                                   ? cfg.hyp_plant()
                                   : wave_to_hyp(cfg.wave_plant()).hyp;
        out.hyp_plant = plant;
        if (explicit_path) {
            out.hyp = hyp_kernel_explicit(plant, grid);
        } else {
            HypSeriesOptions sopts{cfg.solver.n_terms, cfg.solver.tol,
                                   cfg.solver.richardson_levels};
            auto [kernel, ledger] = hyp_kernel_series(plant, grid, sopts);
            out.hyp = std::move(kernel);
            out.ledger = std::move(ledger);
        }
        out.provenance = out.hyp->provenance;
        out.pde_residual = hyp_kernel_residual_sup(*out.hyp, plant);
        double worst = 0.0;
        const Eigen::Index n = grid.size();
        const Eigen::Index m = grid.base().mid();
        const double eps = plant.epsilon;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double x = grid.base().node(i);
            worst = std::max(worst, std::abs(out.hyp->uu.values(i, 2 * m - i)));
            worst = std::max(worst, std::abs(out.hyp->vv.values(i, 2 * m - i)));
            worst = std::max(worst, std::abs(out.hyp->uv.values(i, i) -
                                             plant.c2(x) / (2.0 * eps)));
            worst = std::max(worst, std::abs(out.hyp->vu.values(i, i) +
                                             plant.c3(x) / (2.0 * eps)));
        }
        out.boundary_residual = worst;
    }
    return out;
}

int cmd_kernel(const KernelArgs& args) {
    const RunConfig cfg = load_config(args.config_path, args.class_override);
    const bool explicit_path = use_explicit_path(cfg, args.method);
    const std::string dir = out_dir(cfg, args.out_override);

    SynthesizedKernels kernels = synthesize(cfg, explicit_path);

    nlohmann::json report;
    report["class"] = plant_class_name(cfg.plant_class);
    report["method"] = provenance_name(kernels.provenance);
    report["boundary_residual"] = kernels.boundary_residual;
    report["pde_residual"] = kernels.pde_residual;
    if (kernels.rd && kernels.rd->provenance == KernelProvenance::goursat) {
        report["iterations"] = kernels.rd->iterations;
    }
    if (kernels.ledger) report["series_terms"] = kernels.ledger->terms.size();
    report["config"] = cfg.canonical_text();

    if (kernels.rd) {
        if (cfg.output.csv) {
            write_kernel_csv(dir + "/kernel.csv", kernels.rd->field);
            const RdGains gains = rd_gains(*kernels.rd);
            write_gains_csv(dir + "/gains.csv",
                            {{"g_right", &gains.right}, {"g_left", &gains.left}});
        }
        if (cfg.output.json) {
            write_text_file(dir + "/kernel.json",
                            kernel_json(kernels.rd->field, kernels.rd->provenance).dump(2));
        }
    } else {
        const HypKernel& k = *kernels.hyp;
        if (cfg.output.csv) {
            write_kernel_csv(dir + "/kernel_uu.csv", k.uu);
            write_kernel_csv(dir + "/kernel_uv.csv", k.uv);
            write_kernel_csv(dir + "/kernel_vu.csv", k.vu);
            write_kernel_csv(dir + "/kernel_vv.csv", k.vv);
            const HypGains gains = hyp_gains(k);
            write_gains_csv(dir + "/gains.csv",
                            {{"g1_u", &gains.u1_u},
                             {"g1_v", &gains.u1_v},
                             {"g2_u", &gains.u2_u},
                             {"g2_v", &gains.u2_v}});
        }
        if (cfg.output.json) {
            write_text_file(dir + "/kernel_uu.json", kernel_json(k.uu, k.provenance).dump(2));
            write_text_file(dir + "/kernel_uv.json", kernel_json(k.uv, k.provenance).dump(2));
            write_text_file(dir + "/kernel_vu.json", kernel_json(k.vu, k.provenance).dump(2));
            write_text_file(dir + "/kernel_vv.json", kernel_json(k.vv, k.provenance).dump(2));
        }
        if (kernels.ledger) {
            nlohmann::json ledger;
            ledger["lambda_bar"] = kernels.ledger->lambda_bar;
            for (const SeriesTermRecord& r : kernels.ledger->terms) {
                ledger["terms"].push_back({{"index", r.index},
                                           {"sup_uu", r.sup_uu},
                                           {"sup_uv", r.sup_uv},
                                           {"bound_sup", r.bound_sup}});
            }
            report["series_ledger"] = ledger;
        }
    }
    write_text_file(dir + "/kernel_report.json", report.dump(2));
    std::cout << "kernel written to " << dir << " (method " <<
        provenance_name(kernels.provenance) << ", pde residual "
              << format_double(kernels.pde_residual) << ")\n";
    return 0;
}

int cmd_simulate(const SimulateArgs& args) {
    const RunConfig cfg = load_config(args.config_path, "");
    const std::string dir = out_dir(cfg, args.out_override);
    const IntervalGrid sim_grid(cfg.half_length, cfg.simulation.points);

    std::optional<Trajectory> traj;
    std::optional<TargetCheck> check;

    if (cfg.plant_class == PlantClass::reaction_diffusion) {
        if (!cfg.simulation.dt) throw ConfigError("[simulation] dt is required for this class");
        const RdPlant plant = cfg.rd_plant();
        std::optional<RdGains> gains;
        std::optional<RdKernel> kernel;
        if (!args.open_loop || args.target_check) {
            const bool explicit_path = use_explicit_path(cfg, args.method);
            SynthesizedKernels k = synthesize(cfg, explicit_path);
            kernel = std::move(k.rd);
        }
        if (!args.open_loop) gains = rd_gains(*kernel);
        RdSimOptions opts;
        opts.dt = *cfg.simulation.dt;
        opts.T = cfg.simulation.horizon;
        traj = simulate_rd(plant, sim_grid, gains, cfg.initial_profile("initial", sim_grid),
                           opts);
        if (args.target_check) check = target_check(*traj, *kernel, plant.epsilon);
    } else if (cfg.plant_class == PlantClass::hyperbolic) {
        const HypPlant plant = cfg.hyp_plant();
        std::optional<HypGains> gains;
        std::optional<HypKernel> kernel;
        if (!args.open_loop || args.target_check) {
            SynthesizedKernels k = synthesize(cfg, use_explicit_path(cfg, args.method));
            kernel = std::move(k.hyp);
        }
        if (!args.open_loop) gains = hyp_gains(*kernel);
        HypSimOptions opts{cfg.simulation.horizon, cfg.simulation.dt};
        traj = simulate_hyp(plant, sim_grid, gains, cfg.initial_profile("initial_u", sim_grid),
                            cfg.initial_profile("initial_v", sim_grid), opts);
        if (args.target_check) check = target_check(*traj, *kernel, plant);
    } else {
        const WavePlant plant = cfg.wave_plant();
        std::optional<HypGains> gains;
        std::optional<HypKernel> kernel;
        if (!args.open_loop || args.target_check) {
            SynthesizedKernels k = synthesize(cfg, use_explicit_path(cfg, args.method));
            kernel = std::move(k.hyp);
        }
        if (!args.open_loop) gains = hyp_gains(*kernel);
        WaveSimOptions opts{cfg.simulation.horizon, cfg.simulation.dt};
        traj = simulate_wave(plant, sim_grid, gains,
                             cfg.initial_profile("initial_displacement", sim_grid),
                             cfg.initial_profile("initial_velocity", sim_grid), opts);
        if (args.target_check) check = target_check(*traj, *kernel, wave_to_hyp(plant).hyp);
    }

    if (cfg.output.csv) {
        write_trajectory_csv(dir + "/trajectory.csv", *traj, cfg.output.stride);
    }
    if (cfg.output.json) {
        write_text_file(
            dir + "/summary.json",
            trajectory_summary_json(*traj, cfg.canonical_text(), check ? &*check : nullptr)
                .dump(2));
    }
    const double l2_initial = traj->l2_history(0, 0);
    const double l2_final = traj->l2_history(traj->steps(), 0);
    std::cout << "simulation written to " << dir << " (L2 " << format_double(l2_initial)
              << " -> " << format_double(l2_final)
              << (l2_final > l2_initial ? ", growth" : ", decay") << ")\n";
    return 0;
}

int cmd_compare(const CompareArgs& args) {
    if (!(args.delta_min > 0.0) || !(args.delta_min < args.delta_max)) {
        throw ConfigError("compare: need 0 < delta-min < delta-max");
    }
    if (args.samples < 1) throw ConfigError("compare: need at least one sample");
    fs::create_directories(args.out_dir);

    Eigen::VectorXd deltas(args.samples);
    if (args.samples == 1) {
        deltas[0] = args.delta_min;
    } else {
        for (int i = 0; i < args.samples; ++i) {
            deltas[i] = args.delta_min +
                        (args.delta_max - args.delta_min) * i / (args.samples - 1.0);
        }
    }
    const EffortCurve curve = effort_curve(deltas, args.tol);
    write_effort_csv(args.out_dir + "/effort_curve.csv", curve);
    nlohmann::json j = effort_json(curve);
    j["delta_min"] = args.delta_min;
    j["delta_max"] = args.delta_max;
    j["samples"] = args.samples;
    write_text_file(args.out_dir + "/effort_summary.json", j.dump(2));

    std::cout << "effort curve written to " << args.out_dir;
    if (curve.crossover_literal) {
        std::cout << " (literal-variant crossover at delta = "
                  << format_double(*curve.crossover_literal) << ")";
    } else {
        std::cout << " (literal-variant crossover not found in range)";
    }
    std::cout << "\n";
    return curve.crossover_literal || curve.crossover_shifted ? 0 : kExitConvergence;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bilateral boundary-feedback synthesis and verification for 1-D PDEs"};
    app.require_subcommand(1);

    KernelArgs kargs;
    CLI::App* kernel = app.add_subcommand("kernel", "Synthesize backstepping kernels");
    kernel->add_option("--config", kargs.config_path, "run configuration file")->required();
    kernel->add_option("--class", kargs.class_override, "expected plant class (cross-check)");
    kernel->add_option("--method", kargs.method, "explicit | numeric | auto");
    kernel->add_option("--out", kargs.out_override, "output directory override");

    SimulateArgs sargs;
    CLI::App* simulate = app.add_subcommand("simulate", "Run the closed or open loop");
    simulate->add_option("--config", sargs.config_path, "run configuration file")->required();
    simulate->add_flag("--open-loop", sargs.open_loop, "disable the boundary feedback");
    CLI::Option* closed =
        simulate->add_flag("!--closed-loop", sargs.open_loop, "enable feedback (default)");
    closed->excludes("--open-loop");
    simulate->add_flag("--target-check", sargs.target_check,
                       "verify the transformation against the target dynamics");
    simulate->add_option("--method", sargs.method, "kernel method: explicit | numeric | auto");
    simulate->add_option("--out", sargs.out_override, "output directory override");

    CompareArgs cargs;
    CLI::App* compare =
        app.add_subcommand("compare", "Unilateral vs bilateral control effort");
    compare->add_option("--delta-min", cargs.delta_min, "smallest delta sample");
    compare->add_option("--delta-max", cargs.delta_max, "largest delta sample");
    compare->add_option("--samples", cargs.samples, "number of delta samples");
    compare->add_option("--tol", cargs.tol, "quadrature tolerance");
    compare->add_option("--out", cargs.out_dir, "output directory");

    try {
        app.parse(argc, argv);
        if (kernel->parsed()) return cmd_kernel(kargs);
        if (simulate->parsed()) return cmd_simulate(sargs);
        if (compare->parsed()) return cmd_compare(cargs);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);  // prints usage; 0 for --help
        return rc == 0 ? 0 : kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return kExitConvergence;
    } catch (const BracketError& e) {
        std::cerr << "bracketing error: " << e.what() << "\n";
        return kExitConvergence;
    } catch (const DivergenceError& e) {
        std::cerr << "divergence at step " << e.step_index << ": " << e.what() << "\n";
        return kExitDivergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
