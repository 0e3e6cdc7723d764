#pragma once

#include <utility>
#include <vector>

#include "telsim/analytic.hpp"
#include "telsim/grid.hpp"
#include "telsim/network.hpp"

namespace telsim {

/// Discrete Lyapunov value in characteristic variables, weighted by dx so
/// refinement levels stay comparable:
/// V = 1/2 sum_e dx_e sum_j (xi+^2 + xi-^2).
double lyapunov(const std::vector<EdgeGrid>& state);

/// Physical energy 1/2 sum_e dx_e sum_j (C v^2 + L i^2), the discrete
/// counterpart of the continuous scalar product.
double physical_energy(const std::vector<EdgeGrid>& state, const Network& net);

/// Sum of the componentwise total variations over interior cells.
double total_variation(const EdgeGrid& grid);
double total_variation(const std::vector<EdgeGrid>& state);

/// mu = min over edges of min(R/L, G/C).
double decay_rate(const Network& net);

/// Worst-case envelope v0 * exp(-2 mu t) of the Lyapunov value under
/// homogeneous boundary data.
double analytic_decay_bound(const Network& net, double v0, double t);

/// Log-ratio order estimates c_i = log(err_{i-1}/err_i) / log(dx_{i-1}/dx_i)
/// for a refinement sequence with strictly decreasing dx. Throws
/// std::invalid_argument on non-positive errors.
std::vector<double> convergence_orders(
    const std::vector<std::pair<double, double>>& levels);

struct DiagnosticsTrace {
    std::vector<double> times;
    std::vector<double> lyapunov;
    std::vector<double> tv;
    std::vector<double> energy;
    std::vector<double> max_err;  // filled only when a reference is tracked
};

/// Running max of |xi - zeta| over steps, edges, cells and both families,
/// with the reference sampled at cell centers. Profiles are precomputed so
/// each observation costs one phase rotation per edge.
class ErrorTracker {
  public:
    ErrorTracker(const AnalyticSolution& ref, const std::vector<EdgeGrid>& grids);

    /// Returns the max error of this state; updates the running max.
    double observe(const std::vector<EdgeGrid>& state, double t);
    double max_error() const { return max_err_; }

  private:
    struct EdgeSamples {
        std::vector<Complex> V, I;  // phasor profile at cell centers
        double char_ratio;          // sqrt(C/L)
    };
    double omega_;
    int mode_;
    std::vector<EdgeSamples> edges_;
    double max_err_ = 0.0;
};

/// Least-squares slope of log(values) against times; used to compare a
/// decay history with the analytic envelope.
double log_slope(const std::vector<double>& times, const std::vector<double>& values);

}  // namespace telsim
