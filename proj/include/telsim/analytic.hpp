#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "telsim/network.hpp"

namespace telsim {

/// Per-line constants of one Fourier mode. Both square roots use the
/// principal branch and gamma is the product of the two roots, not the
/// root of the product; the branch choices differ.
struct ModeLineConstants {
    Complex char_admittance;  // Y0_m = sqrt(G + j m w C) / sqrt(R + j m w L)
    Complex propagation;      // gamma_m = sqrt(R + j m w L) * sqrt(G + j m w C)
    int mode = 1;
};

ModeLineConstants mode_constants(const LineParams& params, int mode, double omega);

struct LineSample {
    Complex V;
    Complex I;
};

/// Exact phasor profile of a line with endpoint voltages V0 at x=0 and
/// Vl at x=len. sinh(gamma*len) is nonzero for any valid LineParams.
LineSample line_profile(const ModeLineConstants& consts, Complex V0, Complex Vl,
                        double len, double x);

struct AdmittanceMatrix {
    Eigen::MatrixXcd Y;
    int mode = 1;
};

/// Nodal admittance matrix: diagonal entries sum Y0/tanh(gamma*len) over
/// incident lines, off-diagonals are -Y0/sinh(gamma*len) for connected
/// pairs. Throws ConfigError when two lines share a node pair.
AdmittanceMatrix assemble_admittance(const Network& net, int mode);

struct PhasorSolution {
    Eigen::VectorXcd node_voltage;  // config order
    int mode = 1;
    double residual = 0.0;  // relative residual of the nodal equations

    // Endpoint voltages of an edge; equal to the node voltages by the
    // continuity condition.
    std::pair<Complex, Complex> edge_boundary(const Network& net, int edge) const {
        return {node_voltage[net.edges[edge].start], node_voltage[net.edges[edge].end]};
    }
};

/// Fixes generator voltages, shifts their contribution into the current
/// vector, strikes generator rows/columns and solves the reduced system
/// for load voltages via dense LU with partial pivoting. Throws
/// NumericalError when the reduced matrix is singular (pivot below
/// 1e-12 times the largest entry).
PhasorSolution solve_node_phasors(const Network& net, int mode);

/// xi+- = (i +- sqrt(C/L) v) / 2; inverse of the characteristic map.
std::pair<double, double> to_characteristic(double v, double i, const LineParams& params);

/// Real signal at (x, t) on one edge from its phasor profile:
/// v = Re(V(x) e^{j w t}), i = Re(I(x) e^{j w t}).
std::pair<double, double> evaluate_time_domain(const PhasorSolution& sol,
                                               const Network& net, int edge, double x,
                                               double t);

struct PowerQuantities {
    Eigen::VectorXcd S;  // apparent power per node, S = diag(V) Y* V*
    Eigen::VectorXd P;   // Re(S)
    Eigen::VectorXd Q;   // Im(S)
};

PowerQuantities apparent_power(const PhasorSolution& sol, const AdmittanceMatrix& Y);

/// Solved reference bundled with per-edge profile data so repeated
/// space-time sampling stays cheap: time only enters through one phase
/// rotation.
class AnalyticSolution {
  public:
    AnalyticSolution(const Network& net, PhasorSolution sol);

    LineSample profile(int edge, double x) const;
    std::pair<double, double> v_i(int edge, double x, double t) const;
    std::pair<double, double> xi(int edge, double x, double t) const;

    double char_ratio(int edge) const { return edges_[edge].char_ratio; }
    double omega() const { return omega_; }
    const PhasorSolution& phasors() const { return sol_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }

  private:
    struct EdgeProfile {
        ModeLineConstants consts;
        Complex V0, Vl;
        double length;
        double char_ratio;  // sqrt(C/L)
    };

    double omega_;
    PhasorSolution sol_;
    std::vector<EdgeProfile> edges_;
};

/// Convenience: solve mode m and bundle the sampler.
AnalyticSolution analytic_solution(const Network& net, int mode = 1);

}  // namespace telsim
