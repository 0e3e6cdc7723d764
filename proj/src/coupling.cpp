#include "telsim/coupling.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

namespace telsim {

CouplingMatrices build_coupling_matrices(const Eigen::VectorXd& c) {
    const int n = static_cast<int>(c.size());
    CouplingMatrices cm;
    cm.c = c;
    cm.M = Eigen::MatrixXd::Zero(n, n);
    cm.M.row(0).setOnes();
    for (int k = 1; k < n; ++k) {
        cm.M(k, k - 1) = c[k - 1];
        cm.M(k, k) = -c[k];
    }
    cm.Minv = cm.M.inverse();

    Eigen::VectorXd s_diag = Eigen::VectorXd::Ones(n);
    s_diag[0] = -1.0;
    cm.U = cm.Minv * s_diag.asDiagonal() * cm.M;
    return cm;
}

double coupling_det_closed_form(const Eigen::VectorXd& c) {
    const int n = static_cast<int>(c.size());
    double prod = 1.0, inv_sum = 0.0;
    for (int k = 0; k < n; ++k) {
        prod *= c[k];
        inv_sum += 1.0 / c[k];
    }
    const double sign = (n % 2 == 0) ? -1.0 : 1.0;  // -(-1)^N
    return sign * prod * inv_sum;
}

double coupling_energy_norm(const CouplingMatrices& cm) {
    const Eigen::VectorXd w = cm.c.cwiseSqrt();
    const Eigen::MatrixXd scaled =
        w.asDiagonal() * cm.U * w.cwiseInverse().asDiagonal();
    return scaled.jacobiSvd().singularValues()(0);
}

Eigen::VectorXd load_incoming(const CouplingMatrices& cm, const Eigen::VectorXd& outgoing,
                              double net_current) {
    Eigen::VectorXd rhs = cm.U * outgoing;
    rhs += net_current * cm.Minv.col(0);  // M^-1 * (i_n, 0, ..., 0)^T
    return rhs;
}

Eigen::VectorXd generator_incoming(const Eigen::VectorXd& c,
                                   const Eigen::VectorXd& outgoing, double voltage) {
    return outgoing + voltage * c.cwiseInverse();
}

double second_ghost(double boundary_value, double nearest_interior) {
    return 2.0 * boundary_value - nearest_interior;
}

EdgeEndDescriptor orient_edge_end(const Edge& edge, int node) {
    EdgeEndDescriptor d;
    if (node == edge.start) {
        d.at_start = true;
        d.incoming_is_plus = true;
        d.mirror_sign = 1;
    } else if (node == edge.end) {
        d.at_start = false;
        d.incoming_is_plus = false;
        d.mirror_sign = -1;
    } else {
        throw std::invalid_argument("orient_edge_end: node not incident to edge");
    }
    return d;
}

namespace {

// Linear extrapolation of the two interior cells nearest an end,
// evaluated at the node (half a cell outside the first center).
double outgoing_node_value(const EdgeGrid& g, const EdgeEndDescriptor& end) {
    if (end.at_start) {
        return 0.5 * (3.0 * g.xi_minus[0] - g.xi_minus[1]);
    }
    const int n = g.n_cells;
    return 0.5 * (3.0 * g.xi_plus[n - 1] - g.xi_plus[n - 2]);
}

// Fills the ghost pair of the outgoing family: the interior line
// continued past the end.
void write_outgoing_ghosts(const EdgeGrid& g, const EdgeEndDescriptor& end,
                           EdgeGhosts& ghosts) {
    if (end.at_start) {
        const double u0 = g.xi_minus[0], u1 = g.xi_minus[1];
        ghosts.minus_left = {2.0 * u0 - u1, 3.0 * u0 - 2.0 * u1};
    } else {
        const int n = g.n_cells;
        const double u0 = g.xi_plus[n - 1], u1 = g.xi_plus[n - 2];
        ghosts.plus_right = {2.0 * u0 - u1, 3.0 * u0 - 2.0 * u1};
    }
}

// Fills the ghost pair of the incoming family from the node value
// computed by the coupling: the line through the node value and the
// nearest interior cell.
void write_incoming_ghosts(const EdgeGrid& g, const EdgeEndDescriptor& end,
                           double node_value, EdgeGhosts& ghosts) {
    if (end.at_start) {
        const double u0 = g.xi_plus[0];
        const double g1 = second_ghost(node_value, u0);
        ghosts.plus_left = {g1, 4.0 * node_value - 3.0 * u0};
    } else {
        const int n = g.n_cells;
        const double u0 = g.xi_minus[n - 1];
        const double g1 = second_ghost(node_value, u0);
        ghosts.minus_right = {g1, 4.0 * node_value - 3.0 * u0};
    }
}

}  // namespace

NodeCoupler::NodeCoupler(const Network& net) {
    const int n = static_cast<int>(net.nodes.size());
    kinds_.resize(n);
    spokes_.resize(n);
    spoke_c_.resize(n);
    load_systems_.resize(n);

    for (int k = 0; k < n; ++k) kinds_[k] = net.nodes[k].kind;
    for (std::size_t e = 0; e < net.edges.size(); ++e) {
        const Edge& edge = net.edges[e];
        spokes_[edge.start].push_back({static_cast<int>(e), orient_edge_end(edge, edge.start)});
        spokes_[edge.end].push_back({static_cast<int>(e), orient_edge_end(edge, edge.end)});
    }
    for (int k = 0; k < n; ++k) {
        const int deg = static_cast<int>(spokes_[k].size());
        Eigen::VectorXd c(deg);
        for (int s = 0; s < deg; ++s) {
            const Edge& edge = net.edges[spokes_[k][s].edge];
            c[s] = std::sqrt(edge.params.L / edge.params.C);
        }
        spoke_c_[k] = c;
        if (kinds_[k] == NodeKind::Load && deg > 0) {
            load_systems_[k] = build_coupling_matrices(c);
        }
    }
}

void NodeCoupler::assemble(const std::vector<EdgeGrid>& state,
                           const std::vector<double>& boundary_values,
                           std::vector<EdgeGhosts>& ghosts) const {
    ghosts.resize(state.size());
    for (std::size_t node = 0; node < spokes_.size(); ++node) {
        const auto& spokes = spokes_[node];
        const int deg = static_cast<int>(spokes.size());
        if (deg == 0) continue;

        Eigen::VectorXd outgoing(deg);
        for (int s = 0; s < deg; ++s) {
            const Spoke& sp = spokes[s];
            if (state[sp.edge].n_cells < 2) {
                throw std::invalid_argument(
                    "ghost assembly needs at least two interior cells per edge end");
            }
            outgoing[s] = sp.end.mirror_sign * outgoing_node_value(state[sp.edge], sp.end);
        }

        Eigen::VectorXd incoming;
        if (kinds_[node] == NodeKind::Load) {
            incoming = load_incoming(load_systems_[node], outgoing, boundary_values[node]);
        } else {
            incoming = generator_incoming(spoke_c_[node], outgoing, boundary_values[node]);
        }

        for (int s = 0; s < deg; ++s) {
            const Spoke& sp = spokes[s];
            write_outgoing_ghosts(state[sp.edge], sp.end, ghosts[sp.edge]);
            write_incoming_ghosts(state[sp.edge], sp.end,
                                  sp.end.mirror_sign * incoming[s], ghosts[sp.edge]);
        }
    }
}

}  // namespace telsim
