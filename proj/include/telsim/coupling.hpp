#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "telsim/grid.hpp"
#include "telsim/network.hpp"

namespace telsim {

/// Node coupling system for N lines meeting at one node, all expressed
/// in a frame where every line starts at the node. Row one of M states
/// the current balance, the remaining rows chain the voltage equalities
/// c_e (xi+ - xi-) between consecutive lines. S = diag(-1, 1, ..., 1)
/// and U = M^-1 S M maps outgoing to incoming characteristics.
struct CouplingMatrices {
    Eigen::VectorXd c;  // surge impedances of the spokes
    Eigen::MatrixXd M;
    Eigen::MatrixXd Minv;
    Eigen::MatrixXd U;
};

CouplingMatrices build_coupling_matrices(const Eigen::VectorXd& c);

/// det(M) = -(-1)^N (prod c_i) (sum 1/c_i), nonzero for positive c.
double coupling_det_closed_form(const Eigen::VectorXd& c);

/// Operator norm of U in the inner product weighted by the surge
/// impedances, i.e. the norm in which the node's power balance lives.
/// Equals 1 for every positive c: with zero prescribed current the
/// coupling injects no energy.
double coupling_energy_norm(const CouplingMatrices& cm);

/// Incoming characteristics at a load node: xi+_0 = U xi-_0 + M^-1 itilde.
Eigen::VectorXd load_incoming(const CouplingMatrices& cm, const Eigen::VectorXd& outgoing,
                              double net_current);

/// Incoming characteristics at a generator node: per line,
/// xi+_0 = xi-_0 + v / c_e. Lines decouple.
Eigen::VectorXd generator_incoming(const Eigen::VectorXd& c,
                                   const Eigen::VectorXd& outgoing, double voltage);

/// Linear extrapolation through the computed boundary value and the
/// nearest interior value, continued one spacing past the boundary.
double second_ghost(double boundary_value, double nearest_interior);

/// How an edge end plugs into a node: which family enters the domain
/// there and the sign mapping edge-frame values into the node frame
/// (flip space and negate current for edges that end at the node).
struct EdgeEndDescriptor {
    bool at_start = true;
    bool incoming_is_plus = true;  // xi+ enters at the start end, xi- at the end end
    int mirror_sign = 1;           // node-frame value = mirror_sign * edge-frame value
};

EdgeEndDescriptor orient_edge_end(const Edge& edge, int node);

/// Per-step ghost assembly for every node of a network. Reads frozen
/// edge states, writes only ghost storage, so distinct nodes are
/// independent.
class NodeCoupler {
  public:
    explicit NodeCoupler(const Network& net);

    /// boundary_values[k]: the prescribed v (generator) or net current
    /// (load) of node k at the substep time.
    void assemble(const std::vector<EdgeGrid>& state,
                  const std::vector<double>& boundary_values,
                  std::vector<EdgeGhosts>& ghosts) const;

    int spoke_count(int node) const { return static_cast<int>(spokes_[node].size()); }

  private:
    struct Spoke {
        int edge;
        EdgeEndDescriptor end;
    };

    std::vector<NodeKind> kinds_;
    std::vector<std::vector<Spoke>> spokes_;      // per node
    std::vector<CouplingMatrices> load_systems_;  // per node; unused for generators
    std::vector<Eigen::VectorXd> spoke_c_;        // per node
};

}  // namespace telsim
