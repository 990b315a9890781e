// Integration checks for the command-line driver: exit codes, file outputs,
// and run-to-run determinism. Takes the CLI binary path as argv[1].

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
    if (ok) {
        std::cout << "[ok]   " << what << "\n";
    } else {
        ++failures;
        std::cout << "[FAIL] " << what << "\n";
    }
}

int run(const std::string& cmd) {
    const int rc = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

const char* kRdExplicitConfig = R"(
[plant]
class = reaction-diffusion
epsilon = 1.0
L = 1.0
lambda = 5

[solver]
kernel_points = 101

[simulation]
points = 101
dt = 0.002
T = 0.5
initial = cos(pi*x/2)

[output]
dir = OUTDIR
stride = 25
)";

const char* kRdZeroConfig = R"(
[plant]
class = reaction-diffusion
epsilon = 1.0
L = 1.0
lambda = 0

[solver]
kernel_points = 51

[simulation]
points = 51
dt = 0.01
T = 0.2
initial = 0

[output]
dir = OUTDIR
)";

const char* kDivergentConfig = R"(
[plant]
class = hyperbolic-2x2
epsilon = 1.0
L = 1.0
c1 = 400
c2 = 0
c3 = 0
c4 = 0

[simulation]
points = 201
T = 1.0
initial_u = exp(-4*x^2)
initial_v = 0

[output]
dir = OUTDIR
)";

const char* kHypSeriesConfig = R"(
[plant]
class = hyperbolic-2x2
epsilon = 1.0
L = 1.0
c1_expr = 0.2*x
c2 = 1
c3 = 1
c4 = 0

[solver]
kernel_points = 51
richardson_levels = 2

[simulation]
points = 51
T = 2.2
initial_u = exp(-4*x^2)
initial_v = exp(-4*x^2)

[output]
dir = OUTDIR
)";

const char* kWaveConfig = R"(
[plant]
class = wave
L = 1.0
lambda = 0.25
alpha = 0

[solver]
kernel_points = 101

[simulation]
points = 101
T = 2.2
initial_displacement = 0.5*(1 - x^2)
initial_velocity = 0

[output]
dir = OUTDIR
)";

std::string with_outdir(std::string text, const fs::path& dir) {
    const std::string key = "OUTDIR";
    const size_t at = text.find(key);
    return text.replace(at, key.size(), dir.string());
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: bilat_cli_tests <path-to-bilat>\n";
        return 2;
    }
    const std::string bin = argv[1];
    const fs::path sandbox = fs::temp_directory_path() / "bilat_cli_tests";
    fs::remove_all(sandbox);
    fs::create_directories(sandbox);

    // --- kernel: explicit RD synthesis, diagonal content, determinism -----
    {
        const fs::path out1 = sandbox / "k1";
        const fs::path out2 = sandbox / "k2";
        const fs::path cfg = sandbox / "rd.ini";
        write(cfg, with_outdir(kRdExplicitConfig, out1));
        check(run(bin + " kernel --config " + cfg.string() + " --method explicit") == 0,
              "kernel exits 0 on a valid config");
        check(fs::exists(out1 / "kernel.csv"), "kernel.csv written");
        check(fs::exists(out1 / "kernel_report.json"), "kernel_report.json written");

        // diagonal column equals -lambda x / 2 = -5x/2
        std::ifstream csv(out1 / "kernel.csv");
        std::string line;
        std::getline(csv, line);  // header
        bool diag_ok = true;
        while (std::getline(csv, line)) {
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream row(line);
            double x, xi, k;
            row >> x >> xi >> k;
            if (x == xi && std::abs(k - (-2.5 * x)) > 1e-12) diag_ok = false;
        }
        check(diag_ok, "explicit kernel diagonal equals -5x/2");

        check(run(bin + " kernel --config " + cfg.string() + " --method explicit --out " +
                  out2.string()) == 0,
              "kernel rerun exits 0");
        check(slurp(out1 / "kernel.csv") == slurp(out2 / "kernel.csv"),
              "kernel outputs are byte-identical across runs");

        check(run(bin + " kernel --config " + cfg.string() + " --class wave") == 2,
              "class cross-check failure exits 2");
    }

    // --- kernel: zero coefficient gives an all-zero kernel file -----------
    {
        const fs::path out = sandbox / "k0";
        const fs::path cfg = sandbox / "rd0.ini";
        write(cfg, with_outdir(kRdZeroConfig, out));
        check(run(bin + " kernel --config " + cfg.string()) == 0, "zero-lambda kernel exits 0");
        std::ifstream csv(out / "kernel.csv");
        std::string line;
        std::getline(csv, line);
        bool all_zero = true;
        while (std::getline(csv, line)) {
            const size_t last = line.rfind(',');
            if (std::stod(line.substr(last + 1)) != 0.0) all_zero = false;
        }
        check(all_zero, "zero-lambda kernel file is identically zero");
    }

    // --- simulate: open loop growth vs closed loop decay, target check ----
    {
        const fs::path out_open = sandbox / "s_open";
        const fs::path out_closed = sandbox / "s_closed";
        const fs::path cfg = sandbox / "rd12.ini";
        std::string text = kRdExplicitConfig;
        const size_t at = text.find("lambda = 5");
        text.replace(at, 10, "lambda = 12");
        write(cfg, with_outdir(text, out_open));

        check(run(bin + " simulate --config " + cfg.string() + " --open-loop") == 0,
              "open-loop simulate exits 0");
        auto open_summary = nlohmann::json::parse(slurp(out_open / "summary.json"));
        check(open_summary["growth"]["grew"].get<bool>(),
              "open-loop summary flags growth for lambda = 12");

        check(run(bin + " simulate --config " + cfg.string() + " --closed-loop --target-check" +
                  " --out " + out_closed.string()) == 0,
              "closed-loop simulate exits 0");
        auto closed_summary = nlohmann::json::parse(slurp(out_closed / "summary.json"));
        check(!closed_summary["growth"]["grew"].get<bool>(),
              "closed-loop summary flags decay for lambda = 12");
        check(closed_summary["target_check"]["max_trace_ratio"].get<double>() < 1e-6,
              "closed-loop transformed traces are annihilated");
        check(fs::exists(out_closed / "trajectory.csv"), "trajectory.csv written");

        // config round trip: re-running from the embedded config reproduces
        // the outputs byte for byte
        const fs::path cfg2 = sandbox / "embedded.ini";
        const fs::path out3 = sandbox / "s_closed2";
        write(cfg2, closed_summary["config"].get<std::string>());
        check(run(bin + " simulate --config " + cfg2.string() + " --closed-loop --target-check" +
                  " --out " + out3.string()) == 0,
              "re-run from the embedded config exits 0");
        auto third = nlohmann::json::parse(slurp(out3 / "summary.json"));
        check(slurp(out3 / "trajectory.csv") == slurp(out_closed / "trajectory.csv") &&
                  third["norms"] == closed_summary["norms"],
              "embedded-config rerun reproduces the outputs");
    }

    // --- simulate: zero initial data gives zero trajectory and actuators --
    {
        const fs::path out = sandbox / "s_zero";
        const fs::path cfg = sandbox / "rd0b.ini";
        write(cfg, with_outdir(kRdZeroConfig, out));
        check(run(bin + " simulate --config " + cfg.string()) == 0, "zero simulate exits 0");
        auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
        bool zero = summary["final"]["sup"]["u"].get<double>() == 0.0;
        for (double v : summary["actuators"]["u1"]) zero = zero && v == 0.0;
        for (double v : summary["actuators"]["u2"]) zero = zero && v == 0.0;
        check(zero, "zero data stays zero including the actuators");
    }

    // --- kernel: hyperbolic series path with the term ledger ---------------
    {
        const fs::path out = sandbox / "khyp";
        const fs::path cfg = sandbox / "hyp.ini";
        write(cfg, with_outdir(kHypSeriesConfig, out));
        check(run(bin + " kernel --config " + cfg.string() + " --method numeric") == 0,
              "hyperbolic series kernel exits 0");
        check(fs::exists(out / "kernel_uu.csv") && fs::exists(out / "kernel_uv.csv") &&
                  fs::exists(out / "kernel_vu.csv") && fs::exists(out / "kernel_vv.csv"),
              "one kernel file per component");
        check(fs::exists(out / "gains.csv"), "gains.csv written");
        auto report = nlohmann::json::parse(slurp(out / "kernel_report.json"));
        check(report.contains("series_ledger") &&
                  report["series_ledger"]["terms"].size() >= 5,
              "report carries the series term ledger");
        check(report["boundary_residual"].get<double>() < 1e-8,
              "reported boundary residual is at solver tolerance");
    }

    // --- simulate: hyperbolic closed loop decays in finite time ------------
    {
        const fs::path out = sandbox / "shyp";
        const fs::path cfg = sandbox / "hyp2.ini";
        write(cfg, with_outdir(kHypSeriesConfig, out));
        check(run(bin + " simulate --config " + cfg.string() + " --closed-loop") == 0,
              "hyperbolic closed-loop simulate exits 0");
        auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
        const double initial = summary["initial"]["sup"]["u"].get<double>();
        const double final_u = summary["final"]["sup"]["u"].get<double>();
        const double final_v = summary["final"]["sup"]["v"].get<double>();
        check(std::max(final_u, final_v) < 0.05 * initial,
              "hyperbolic state collapses after the transit time");
    }

    // --- simulate: wave closed loop through the reduction ------------------
    {
        const fs::path out = sandbox / "swave";
        const fs::path cfg = sandbox / "wave.ini";
        write(cfg, with_outdir(kWaveConfig, out));
        check(run(bin + " simulate --config " + cfg.string() + " --closed-loop") == 0,
              "wave closed-loop simulate exits 0");
        auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
        const double w0 = summary["initial"]["sup"]["w"].get<double>();
        const double w1 = summary["final"]["sup"]["w"].get<double>();
        const double v1 = summary["final"]["sup"]["v"].get<double>();
        check(std::max(w1, v1) < 0.1 * w0, "riemann pair collapses after the transit time");
    }

    // --- kernel: tabulated coefficient and convergence failure -------------
    {
        const fs::path table = sandbox / "lambda.csv";
        write(table, "x,value\n-1,3\n-0.5,4\n0,5\n0.5,4\n1,3\n");
        const fs::path out = sandbox / "ktab";
        const fs::path cfg = sandbox / "tab.ini";
        write(cfg, "[plant]\nclass = rd\nL = 1\nlambda_table = " + table.string() +
                       "\n[solver]\nkernel_points = 51\n[output]\ndir = " + out.string() +
                       "\n");
        check(run(bin + " kernel --config " + cfg.string()) == 0,
              "tabulated-coefficient kernel exits 0");
        auto report = nlohmann::json::parse(slurp(out / "kernel_report.json"));
        check(report["method"] == "goursat", "tabulated coefficients take the numeric path");

        const fs::path cfg2 = sandbox / "stall.ini";
        write(cfg2, "[plant]\nclass = rd\nL = 1\nlambda = 8\n[solver]\nkernel_points = 51\n"
                    "max_iter = 1\n[output]\ndir = " +
                        (sandbox / "kstall").string() + "\n");
        check(run(bin + " kernel --config " + cfg2.string() + " --method numeric") == 3,
              "convergence failure exits 3");
    }

    // --- simulate: divergence exits 4 --------------------------------------
    {
        const fs::path out = sandbox / "s_div";
        const fs::path cfg = sandbox / "div.ini";
        write(cfg, with_outdir(kDivergentConfig, out));
        check(run(bin + " simulate --config " + cfg.string() + " --open-loop") == 4,
              "divergent simulation exits 4");
    }

    // --- config errors exit 2 ----------------------------------------------
    {
        const fs::path cfg = sandbox / "bad.ini";
        write(cfg, "[plant]\nclass = rd\nL = 1\nlambda = 1\nmystery = 3\n");
        check(run(bin + " simulate --config " + cfg.string()) == 2,
              "unknown config key exits 2");
        check(run(bin + " simulate --config " + (sandbox / "missing.ini").string()) == 2,
              "missing config file exits 2");
    }

    // --- compare ------------------------------------------------------------
    {
        const fs::path out = sandbox / "cmp";
        check(run(bin + " compare --delta-min 0.5 --delta-max 5 --samples 10 --out " +
                  out.string()) == 0,
              "compare exits 0 when the crossover is bracketed");
        auto summary = nlohmann::json::parse(slurp(out / "effort_summary.json"));
        const double star = summary["crossover_literal"].get<double>();
        check(star > 1.5 && star < 2.5, "reported crossover lies in [1.5, 2.5]");
        check(summary["crossover_shifted"].is_null(),
              "shifted-variant crossover reported as not found");

        const fs::path out_again = sandbox / "cmp_again";
        check(run(bin + " compare --delta-min 0.5 --delta-max 5 --samples 10 --out " +
                  out_again.string()) == 0 &&
                  slurp(out_again / "effort_curve.csv") == slurp(out / "effort_curve.csv"),
              "compare outputs are byte-identical across runs");

        const fs::path out2 = sandbox / "cmp_none";
        check(run(bin + " compare --delta-min 0.1 --delta-max 0.2 --samples 5 --out " +
                  out2.string()) == 3,
              "compare exits 3 when no crossover is bracketed");
        check(fs::exists(out2 / "effort_curve.csv"),
              "effort curve still written without a crossover");

        check(run(bin + " compare --delta-min 2 --delta-max 1") == 2,
              "inverted delta range exits 2");
    }

    std::cout << (failures == 0 ? "all cli checks passed\n"
                                : std::to_string(failures) + " cli checks failed\n");
    return failures == 0 ? 0 : 1;
}
