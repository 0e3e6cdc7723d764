#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "telsim/errors.hpp"
#include "telsim/io.hpp"

namespace {

struct CliOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::string limiter;
    std::string init;
    std::string boundary;
    std::string levels = "1..9";
    double cfl = 0.0;
    double dx = 0.0;
    double t_end = 0.0;
    bool has_cfl = false, has_dx = false, has_t_end = false;
};

void add_common_options(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--config", opt.config_path, "run config file (json)")->required();
    cmd->add_option("--out", opt.out_dir, "output directory");
    cmd->add_option("--limiter", opt.limiter, "minmod or none")
        ->check(CLI::IsMember({"minmod", "none"}));
    cmd->add_option("--cfl", opt.cfl, "CFL number in (0, 1]");
    cmd->add_option("--dx", opt.dx, "target spatial step");
    cmd->add_option("--t-end", opt.t_end, "time horizon");
    cmd->add_option("--init", opt.init, "zero or analytic")
        ->check(CLI::IsMember({"zero", "analytic"}));
    cmd->add_option("--boundary", opt.boundary, "prescribed or homogeneous")
        ->check(CLI::IsMember({"prescribed", "homogeneous"}));
}

telsim::RunConfig config_with_overrides(const CLI::App* cmd, const CliOptions& opt) {
    telsim::RunConfig cfg = telsim::load_run_config(opt.config_path);
    if (cmd->count("--limiter")) {
        cfg.scheme.limiter =
            opt.limiter == "minmod" ? telsim::Limiter::Minmod : telsim::Limiter::None;
    }
    if (cmd->count("--cfl")) cfg.scheme.cfl = opt.cfl;
    if (cmd->count("--dx")) cfg.scheme.dx_target = opt.dx;
    if (cmd->count("--t-end")) cfg.scheme.t_end = opt.t_end;
    if (cmd->count("--init")) {
        cfg.init = opt.init == "zero" ? telsim::InitMode::Zero : telsim::InitMode::Analytic;
    }
    if (cmd->count("--boundary")) {
        cfg.boundary = opt.boundary == "prescribed" ? telsim::BoundaryMode::Prescribed
                                                    : telsim::BoundaryMode::Homogeneous;
    }
    if (!(cfg.scheme.cfl > 0.0) || cfg.scheme.cfl > 1.0) {
        throw telsim::ConfigError("cfl must lie in (0, 1]");
    }
    if (!(cfg.scheme.dx_target > 0.0)) {
        throw telsim::ConfigError("dx must be positive");
    }
    if (cfg.scheme.t_end < 0.0) {
        throw telsim::ConfigError("t-end must be nonnegative");
    }
    return cfg;
}

std::vector<int> parse_levels(const std::string& spec) {
    try {
        const auto pos = spec.find("..");
        if (pos == std::string::npos) return {std::stoi(spec)};
        const int lo = std::stoi(spec.substr(0, pos));
        const int hi = std::stoi(spec.substr(pos + 2));
        if (hi < lo) throw telsim::ConfigError("levels: empty range " + spec);
        std::vector<int> levels;
        for (int i = lo; i <= hi; ++i) levels.push_back(i);
        return levels;
    } catch (const std::invalid_argument&) {
        throw telsim::ConfigError("levels: expected <i..j> or <i>, got " + spec);
    } catch (const std::out_of_range&) {
        throw telsim::ConfigError("levels: value out of range in " + spec);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Telegrapher-equation simulator for power networks"};
    app.require_subcommand(1);

    CliOptions opt;
    CLI::App* simulate = app.add_subcommand(
        "simulate", "integrate the network and write field/trace csv files");
    add_common_options(simulate, opt);
    CLI::App* converge = app.add_subcommand(
        "converge", "grid refinement study against the periodic reference");
    add_common_options(converge, opt);
    converge->add_option("--levels", opt.levels, "refinement exponents, e.g. 1..9");
    CLI::App* power =
        app.add_subcommand("power", "nodal voltages and apparent power (csv)");
    add_common_options(power, opt);
    CLI::App* validate_cmd =
        app.add_subcommand("validate", "check the network file and report violations");
    add_common_options(validate_cmd, opt);

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            telsim::run_simulate(config_with_overrides(simulate, opt), opt.out_dir);
        } else if (converge->parsed()) {
            telsim::run_converge(config_with_overrides(converge, opt),
                                 parse_levels(opt.levels), opt.out_dir);
        } else if (power->parsed()) {
            telsim::run_power(config_with_overrides(power, opt), opt.out_dir);
        } else if (validate_cmd->parsed()) {
            const telsim::RunConfig cfg = config_with_overrides(validate_cmd, opt);
            const telsim::Network net = telsim::load_network(cfg.network_path);
            std::cout << "ok: " << net.nodes.size() << " nodes, " << net.edges.size()
                      << " edges, omega = " << net.omega << "\n";
        }
    } catch (const telsim::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const telsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
