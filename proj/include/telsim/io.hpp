#pragma once

#include <string>
#include <vector>

#include "telsim/network.hpp"
#include "telsim/solver.hpp"

namespace telsim {

/// Loads and validates a network file. Parse failures and validation
/// violations throw ConfigError naming the offending field. Node indices
/// follow file order.
Network load_network(const std::string& path);
void save_network(const Network& net, const std::string& path);

struct OutputFlags {
    bool fields = true;
    bool lyapunov = true;
    bool tv = true;
    bool error = false;
};

struct RunConfig {
    std::string network_path;
    SchemeConfig scheme;
    OutputFlags outputs;
    std::vector<double> snapshot_times;
    InitMode init = InitMode::Zero;
    BoundaryMode boundary = BoundaryMode::Prescribed;
};

/// Reads a run config; a relative network path resolves against the
/// config file's directory.
RunConfig load_run_config(const std::string& path);

/// Integrates the network and writes fields_<time>.csv snapshots plus
/// trace.csv with the per-step diagnostics picked by the output flags
/// (fixed column order time, lyapunov, tv, energy, max_err; energy rides
/// with the lyapunov flag). A snapshot at t_end is written whenever
/// fields output is on; t_end = 0 emits the initial state only.
void run_simulate(const RunConfig& config, const std::string& out_dir);

/// Refinement study with dx_target = 2^-i per level; writes
/// convergence.csv rows (dx, max_err, order), order being nan on the
/// first level.
void run_converge(const RunConfig& config, const std::vector<int>& levels,
                  const std::string& out_dir);

/// Solves the nodal phasor system and writes power.csv rows
/// (node, v_re, v_im, p, q).
void run_power(const RunConfig& config, const std::string& out_dir);

}  // namespace telsim
