#include "bilat/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace bilat {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write file '" + path + "'");
    out << content;
}

void write_kernel_csv(const std::string& path, const HourglassField& field) {
    std::ostringstream out;
    out << "x,xi,K\n";
    const HourglassGrid& grid = field.grid;
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        for (Eigen::Index j = 0; j < grid.size(); ++j) {
            if (!grid.contains(i, j)) continue;
            out << format_double(grid.base().node(i)) << ','
                << format_double(grid.base().node(j)) << ','
                << format_double(field.values(i, j)) << '\n';
        }
    }
    write_text_file(path, out.str());
}

void write_gains_csv(const std::string& path,
                     const std::vector<std::pair<std::string, const GainFunction*>>& gains) {
    if (gains.empty()) throw ConfigError("write_gains_csv: no gains given");
    const IntervalGrid& grid = gains.front().second->grid();
    std::ostringstream out;
    out << "xi";
    for (const auto& [name, g] : gains) {
        if (!g->grid().same_layout(grid)) {
            throw ConfigError("write_gains_csv: gains live on different grids");
        }
        out << ',' << name;
    }
    out << '\n';
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        out << format_double(grid.node(i));
        for (const auto& [name, g] : gains) out << ',' << format_double(g->sample(i));
        out << '\n';
    }
    write_text_file(path, out.str());
}

std::string provenance_name(KernelProvenance p) {
    switch (p) {
        case KernelProvenance::explicit_form: return "explicit";
        case KernelProvenance::goursat: return "goursat";
        case KernelProvenance::series: return "series";
    }
    return "?";
}

nlohmann::json kernel_json(const HourglassField& field, KernelProvenance provenance) {
    nlohmann::json j;
    j["grid"]["half_length"] = field.grid.base().half_length();
    j["grid"]["points"] = field.grid.size();
    j["provenance"] = provenance_name(provenance);
    std::vector<std::vector<double>> rows(field.grid.size());
    for (Eigen::Index i = 0; i < field.grid.size(); ++i) {
        rows[i].assign(field.values.row(i).begin(), field.values.row(i).end());
    }
    j["values"] = rows;  // row-major, zero outside the hourglass
    return j;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj, int stride) {
    if (stride < 1) throw ConfigError("trajectory stride must be >= 1");
    std::ostringstream out;
    out << "t,x,field,value\n";
    const Eigen::Index steps = traj.steps();
    for (Eigen::Index k = 0; k <= steps; k += stride) {
        const Eigen::Index row = (k > steps) ? steps : k;
        for (size_t f = 0; f < traj.fields.size(); ++f) {
            for (Eigen::Index i = 0; i < traj.grid.size(); ++i) {
                out << format_double(traj.times[row]) << ','
                    << format_double(traj.grid.node(i)) << ',' << traj.field_names[f] << ','
                    << format_double(traj.fields[f](row, i)) << '\n';
            }
        }
    }
    if (steps % stride != 0) {  // always include the terminal state
        for (size_t f = 0; f < traj.fields.size(); ++f) {
            for (Eigen::Index i = 0; i < traj.grid.size(); ++i) {
                out << format_double(traj.times[steps]) << ','
                    << format_double(traj.grid.node(i)) << ',' << traj.field_names[f] << ','
                    << format_double(traj.fields[f](steps, i)) << '\n';
            }
        }
    }
    write_text_file(path, out.str());
}

nlohmann::json trajectory_summary_json(const Trajectory& traj, const std::string& config_text,
                                       const TargetCheck* check) {
    nlohmann::json j;
    switch (traj.plant_class) {
        case PlantClass::reaction_diffusion: j["class"] = "reaction-diffusion"; break;
        case PlantClass::hyperbolic: j["class"] = "hyperbolic-2x2"; break;
        case PlantClass::wave: j["class"] = "wave"; break;
    }
    j["dt"] = traj.dt;
    j["steps"] = traj.steps();
    j["grid"]["half_length"] = traj.grid.half_length();
    j["grid"]["points"] = traj.grid.size();
    j["times"] = std::vector<double>(traj.times.begin(), traj.times.end());
    j["actuators"]["u1"] =
        std::vector<double>(traj.u1_history.begin(), traj.u1_history.end());
    j["actuators"]["u2"] =
        std::vector<double>(traj.u2_history.begin(), traj.u2_history.end());
    for (size_t f = 0; f < traj.field_names.size(); ++f) {
        const Eigen::VectorXd l2 = traj.l2_history.col(f);
        const Eigen::VectorXd sup = traj.sup_history.col(f);
        j["norms"]["l2"][traj.field_names[f]] = std::vector<double>(l2.begin(), l2.end());
        j["norms"]["sup"][traj.field_names[f]] = std::vector<double>(sup.begin(), sup.end());
        j["final"]["l2"][traj.field_names[f]] = l2[l2.size() - 1];
        j["final"]["sup"][traj.field_names[f]] = sup[sup.size() - 1];
        j["initial"]["l2"][traj.field_names[f]] = l2[0];
        j["initial"]["sup"][traj.field_names[f]] = sup[0];
    }
    const double l2_initial = traj.l2_history(0, 0);
    const double l2_final = traj.l2_history(traj.steps(), 0);
    j["growth"]["l2_ratio"] = l2_initial > 0.0 ? l2_final / l2_initial : 0.0;
    j["growth"]["grew"] = l2_final > l2_initial;
    j["config"] = config_text;
    if (check) {
        nlohmann::json tc;
        tc["max_trace_ratio"] = check->max_trace_ratio();
        for (size_t f = 0; f < check->field_names.size(); ++f) {
            const Eigen::VectorXd l2 = check->l2.col(f);
            tc["l2"][check->field_names[f]] = std::vector<double>(l2.begin(), l2.end());
        }
        if (std::isfinite(check->target_residual)) {
            tc["target_residual"] = check->target_residual;
        }
        j["target_check"] = tc;
    }
    return j;
}

void write_effort_csv(const std::string& path, const EffortCurve& curve) {
    std::ostringstream out;
    out << "delta,J1_literal,J1_shifted,J2\n";
    for (Eigen::Index i = 0; i < curve.deltas.size(); ++i) {
        out << format_double(curve.deltas[i]) << ',' << format_double(curve.j1_literal[i])
            << ',' << format_double(curve.j1_shifted[i]) << ',' << format_double(curve.j2[i])
            << '\n';
    }
    write_text_file(path, out.str());
}

EffortCurve load_effort_curve(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open effort curve '" + path + "'");
    std::string line;
    std::vector<double> d, a, b, c;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("delta,", 0) == 0) continue;  // header
        }
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double vd, va, vb, vc;
        if (!(row >> vd >> va >> vb >> vc)) {
            throw ConfigError("effort curve '" + path + "': malformed row");
        }
        d.push_back(vd);
        a.push_back(va);
        b.push_back(vb);
        c.push_back(vc);
    }
    EffortCurve curve;
    curve.deltas = Eigen::Map<Eigen::VectorXd>(d.data(), d.size());
    curve.j1_literal = Eigen::Map<Eigen::VectorXd>(a.data(), a.size());
    curve.j1_shifted = Eigen::Map<Eigen::VectorXd>(b.data(), b.size());
    curve.j2 = Eigen::Map<Eigen::VectorXd>(c.data(), c.size());
    return curve;
}

nlohmann::json effort_json(const EffortCurve& curve) {
    nlohmann::json j;
    j["delta"] = std::vector<double>(curve.deltas.begin(), curve.deltas.end());
    j["J1_literal"] = std::vector<double>(curve.j1_literal.begin(), curve.j1_literal.end());
    j["J1_shifted"] = std::vector<double>(curve.j1_shifted.begin(), curve.j1_shifted.end());
    j["J2"] = std::vector<double>(curve.j2.begin(), curve.j2.end());
    if (curve.crossover_literal) {
        j["crossover_literal"] = *curve.crossover_literal;
    } else {
        j["crossover_literal"] = nullptr;
    }
    if (curve.crossover_shifted) {
        j["crossover_shifted"] = *curve.crossover_shifted;
    } else {
        j["crossover_shifted"] = nullptr;
    }
    return j;
}

}  // namespace bilat
