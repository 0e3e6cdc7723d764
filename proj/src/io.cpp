#include "telsim/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <nlohmann/json.hpp>
#include <set>
#include <iostream>
#include <sstream>

#include "telsim/analytic.hpp"
#include "telsim/diagnostics.hpp"
#include "telsim/errors.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace telsim {

namespace {

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("parse error in " + path + ": " + e.what());
    }
    return j;
}

double require_number(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_number()) {
        throw ConfigError(where + ": missing or non-numeric field '" + key + "'");
    }
    return j[key].get<double>();
}

Complex parse_phasor(const json& j, const std::string& where) {
    if (!j.contains("phasor") || !j["phasor"].is_object()) {
        throw ConfigError(where + ": missing field 'phasor' ({re, im})");
    }
    const json& p = j["phasor"];
    return {require_number(p, "re", where + ".phasor"),
            require_number(p, "im", where + ".phasor")};
}

Network parse_network(const json& j, const std::string& path) {
    Network net;
    net.omega = require_number(j, "omega", path);

    if (!j.contains("nodes") || !j["nodes"].is_array()) {
        throw ConfigError(path + ": missing array 'nodes'");
    }
    for (const json& jn : j["nodes"]) {
        Node node;
        if (!jn.contains("id") || !jn["id"].is_string()) {
            throw ConfigError(path + ": node without string field 'id'");
        }
        node.id = jn["id"].get<std::string>();
        const std::string where = path + ": node " + node.id;
        if (!jn.contains("type") || !jn["type"].is_string()) {
            throw ConfigError(where + ": missing field 'type'");
        }
        const std::string type = jn["type"].get<std::string>();
        if (type == "generator") {
            node.kind = NodeKind::Generator;
        } else if (type == "load") {
            node.kind = NodeKind::Load;
        } else {
            throw ConfigError(where + ": unknown type '" + type +
                              "' in field 'type' (expected generator or load)");
        }
        node.phasor = parse_phasor(jn, where);
        net.nodes.push_back(std::move(node));
    }

    if (!j.contains("edges") || !j["edges"].is_array()) {
        throw ConfigError(path + ": missing array 'edges'");
    }
    int index = 0;
    for (const json& je : j["edges"]) {
        const std::string where = path + ": edge " + std::to_string(index++);
        Edge e;
        for (const char* key : {"from", "to"}) {
            if (!je.contains(key) || !je[key].is_string()) {
                throw ConfigError(where + ": missing string field '" + key + "'");
            }
        }
        e.start = net.node_index(je["from"].get<std::string>());
        e.end = net.node_index(je["to"].get<std::string>());
        if (e.start < 0 || e.end < 0) {
            throw ConfigError(where + ": 'from'/'to' must reference declared node ids");
        }
        e.params.R = require_number(je, "R", where);
        e.params.L = require_number(je, "L", where);
        e.params.G = require_number(je, "G", where);
        e.params.C = require_number(je, "C", where);
        e.params.length = require_number(je, "length", where);
        net.edges.push_back(e);
    }
    return net;
}

std::string fmt_full(double x) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x,
                                   std::chars_format::scientific, 16);
    return std::string(buf, ptr);
}

std::string fmt_label(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write file: " + path.string());
    return out;
}

void write_fields_csv(const fs::path& dir, double label_time, const Network& net,
                      const std::vector<EdgeGrid>& state) {
    auto out = open_output(dir / ("fields_" + fmt_label(label_time) + ".csv"));
    out << "edge,x,xi_plus,xi_minus,v,i\n";
    for (std::size_t e = 0; e < state.size(); ++e) {
        const EdgeGrid& g = state[e];
        const double c = std::sqrt(net.edges[e].params.L / net.edges[e].params.C);
        for (int k = 0; k < g.n_cells; ++k) {
            const double xp = g.xi_plus[k], xm = g.xi_minus[k];
            out << e << ',' << fmt_full((k + 0.5) * g.dx) << ',' << fmt_full(xp) << ','
                << fmt_full(xm) << ',' << fmt_full(c * (xp - xm)) << ','
                << fmt_full(xp + xm) << '\n';
        }
    }
}

}  // namespace

Network load_network(const std::string& path) {
    const Network net = parse_network(read_json(path), path);
    const ValidationReport report = validate(net);
    if (!report.ok()) {
        std::ostringstream ss;
        ss << path << ": invalid network:";
        for (const auto& v : report.violations) ss << "\n  - " << v;
        throw ConfigError(ss.str());
    }
    return net;
}

void save_network(const Network& net, const std::string& path) {
    json j;
    j["omega"] = net.omega;
    j["nodes"] = json::array();
    for (const Node& n : net.nodes) {
        j["nodes"].push_back(
            {{"id", n.id},
             {"type", n.kind == NodeKind::Generator ? "generator" : "load"},
             {"phasor", {{"re", n.phasor.real()}, {"im", n.phasor.imag()}}}});
    }
    j["edges"] = json::array();
    for (const Edge& e : net.edges) {
        j["edges"].push_back({{"from", net.nodes[e.start].id},
                              {"to", net.nodes[e.end].id},
                              {"R", e.params.R},
                              {"L", e.params.L},
                              {"G", e.params.G},
                              {"C", e.params.C},
                              {"length", e.params.length}});
    }
    auto out = open_output(path);
    out << j.dump(2) << '\n';
}

RunConfig load_run_config(const std::string& path) {
    const json j = read_json(path);
    RunConfig cfg;

    if (!j.contains("network") || !j["network"].is_string()) {
        throw ConfigError(path + ": missing string field 'network'");
    }
    fs::path net_path = j["network"].get<std::string>();
    if (net_path.is_relative()) net_path = fs::path(path).parent_path() / net_path;
    cfg.network_path = net_path.string();

    if (j.contains("scheme")) {
        const json& s = j["scheme"];
        if (s.contains("limiter")) {
            const std::string lim = s["limiter"].get<std::string>();
            if (lim == "minmod") {
                cfg.scheme.limiter = Limiter::Minmod;
            } else if (lim == "none") {
                cfg.scheme.limiter = Limiter::None;
            } else {
                throw ConfigError(path + ": scheme.limiter must be minmod or none");
            }
        }
        if (s.contains("cfl")) cfg.scheme.cfl = require_number(s, "cfl", path);
        if (s.contains("dx_target"))
            cfg.scheme.dx_target = require_number(s, "dx_target", path);
        if (s.contains("t_end")) cfg.scheme.t_end = require_number(s, "t_end", path);
    }
    if (!(cfg.scheme.cfl > 0.0) || cfg.scheme.cfl > 1.0) {
        throw ConfigError(path + ": scheme.cfl must lie in (0, 1]");
    }
    if (!(cfg.scheme.dx_target > 0.0)) {
        throw ConfigError(path + ": scheme.dx_target must be positive");
    }
    if (cfg.scheme.t_end < 0.0) {
        throw ConfigError(path + ": scheme.t_end must be nonnegative");
    }

    if (j.contains("outputs")) {
        const json& o = j["outputs"];
        if (o.contains("fields")) cfg.outputs.fields = o["fields"].get<bool>();
        if (o.contains("lyapunov")) cfg.outputs.lyapunov = o["lyapunov"].get<bool>();
        if (o.contains("tv")) cfg.outputs.tv = o["tv"].get<bool>();
        if (o.contains("error")) cfg.outputs.error = o["error"].get<bool>();
    }
    if (j.contains("snapshot_times")) {
        for (const json& t : j["snapshot_times"]) {
            cfg.snapshot_times.push_back(t.get<double>());
        }
    }
    if (j.contains("init")) {
        const std::string init = j["init"].get<std::string>();
        if (init == "zero") {
            cfg.init = InitMode::Zero;
        } else if (init == "analytic") {
            cfg.init = InitMode::Analytic;
        } else {
            throw ConfigError(path + ": init must be zero or analytic");
        }
    }
    if (j.contains("boundary")) {
        const std::string b = j["boundary"].get<std::string>();
        if (b == "prescribed") {
            cfg.boundary = BoundaryMode::Prescribed;
        } else if (b == "homogeneous") {
            cfg.boundary = BoundaryMode::Homogeneous;
        } else {
            throw ConfigError(path + ": boundary must be prescribed or homogeneous");
        }
    }
    return cfg;
}

void run_simulate(const RunConfig& config, const std::string& out_dir) {
    const Network net = load_network(config.network_path);
    fs::create_directories(out_dir);

    Simulator sim(net, config.scheme, config.boundary);

    std::unique_ptr<AnalyticSolution> ref;
    if (config.init == InitMode::Analytic || config.outputs.error) {
        ref = std::make_unique<AnalyticSolution>(analytic_solution(net, 1));
    }
    if (config.init == InitMode::Analytic) {
        sim.init_from(*ref);
    } else {
        sim.init_zero();
    }

    std::unique_ptr<ErrorTracker> tracker;
    if (config.outputs.error) tracker = std::make_unique<ErrorTracker>(*ref, sim.state());

    DiagnosticsTrace trace;
    const auto record = [&](const Simulator& s) {
        trace.times.push_back(s.time());
        if (config.outputs.lyapunov) {
            trace.lyapunov.push_back(lyapunov(s.state()));
            trace.energy.push_back(physical_energy(s.state(), net));
        }
        if (config.outputs.tv) trace.tv.push_back(total_variation(s.state()));
        if (tracker) trace.max_err.push_back(tracker->observe(s.state(), s.time()));
    };
    record(sim);

    // Segment the run at the requested snapshot times so snapshots land
    // on exact times via shortened steps.
    std::set<double> marks(config.snapshot_times.begin(), config.snapshot_times.end());
    marks.insert(config.scheme.t_end);
    double previous = 0.0;
    for (double mark : marks) {
        if (mark < 0.0) {
            throw ConfigError("negative snapshot time: " + fmt_label(mark));
        }
        if (mark > config.scheme.t_end) {
            std::cerr << "note: skipping snapshot at t = " << fmt_label(mark)
                      << " beyond t_end = " << fmt_label(config.scheme.t_end) << "\n";
            continue;
        }
        if (mark > previous) {
            sim.run_until(mark, record);
            previous = mark;
        }
        if (config.outputs.fields) {
            write_fields_csv(out_dir, mark, net, sim.state());
        }
    }

    // Column set follows the output flags; the order is fixed. The physical
    // energy rides with the lyapunov flag as its companion functional.
    if (!config.outputs.lyapunov && !config.outputs.tv && !tracker) return;
    auto out = open_output(fs::path(out_dir) / "trace.csv");
    out << "time";
    if (config.outputs.lyapunov) out << ",lyapunov";
    if (config.outputs.tv) out << ",tv";
    if (config.outputs.lyapunov) out << ",energy";
    if (tracker) out << ",max_err";
    out << '\n';
    for (std::size_t k = 0; k < trace.times.size(); ++k) {
        out << fmt_full(trace.times[k]);
        if (config.outputs.lyapunov) out << ',' << fmt_full(trace.lyapunov[k]);
        if (config.outputs.tv) out << ',' << fmt_full(trace.tv[k]);
        if (config.outputs.lyapunov) out << ',' << fmt_full(trace.energy[k]);
        if (tracker) out << ',' << fmt_full(trace.max_err[k]);
        out << '\n';
    }
}

void run_converge(const RunConfig& config, const std::vector<int>& levels,
                  const std::string& out_dir) {
    const Network net = load_network(config.network_path);
    fs::create_directories(out_dir);
    const AnalyticSolution ref = analytic_solution(net, 1);

    std::vector<std::pair<double, double>> rows;
    for (int level : levels) {
        SchemeConfig scheme = config.scheme;
        scheme.dx_target = std::ldexp(1.0, -level);

        // The error metric compares against the periodic reference, so the
        // study always starts from it.
        Simulator sim(net, scheme, config.boundary);
        sim.init_from(ref);
        ErrorTracker tracker(ref, sim.state());
        sim.run_until(scheme.t_end, [&](const Simulator& s) {
            tracker.observe(s.state(), s.time());
        });
        rows.emplace_back(scheme.dx_target, tracker.max_error());
    }

    auto out = open_output(fs::path(out_dir) / "convergence.csv");
    out << "dx,max_err,order\n";
    for (std::size_t k = 0; k < rows.size(); ++k) {
        double order = std::numeric_limits<double>::quiet_NaN();
        if (k > 0 && rows[k - 1].second > 0.0 && rows[k].second > 0.0) {
            order = std::log(rows[k - 1].second / rows[k].second) /
                    std::log(rows[k - 1].first / rows[k].first);
        }
        out << fmt_full(rows[k].first) << ',' << fmt_full(rows[k].second) << ','
            << fmt_full(order) << '\n';
    }
}

void run_power(const RunConfig& config, const std::string& out_dir) {
    const Network net = load_network(config.network_path);
    fs::create_directories(out_dir);

    const PhasorSolution sol = solve_node_phasors(net, 1);
    const AdmittanceMatrix adm = assemble_admittance(net, 1);
    const PowerQuantities power = apparent_power(sol, adm);

    auto out = open_output(fs::path(out_dir) / "power.csv");
    out << "node,v_re,v_im,p,q\n";
    for (std::size_t k = 0; k < net.nodes.size(); ++k) {
        out << net.nodes[k].id << ',' << fmt_full(sol.node_voltage[k].real()) << ','
            << fmt_full(sol.node_voltage[k].imag()) << ',' << fmt_full(power.P[k]) << ','
            << fmt_full(power.Q[k]) << '\n';
    }
}

}  // namespace telsim
