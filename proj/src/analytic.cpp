#include "telsim/analytic.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include "telsim/errors.hpp"

namespace telsim {

ModeLineConstants mode_constants(const LineParams& p, int mode, double omega) {
    const Complex jmw{0.0, mode * omega};
    const Complex series = std::sqrt(Complex(p.R, 0.0) + jmw * p.L);
    const Complex shunt = std::sqrt(Complex(p.G, 0.0) + jmw * p.C);
    ModeLineConstants c;
    c.char_admittance = shunt / series;
    c.propagation = series * shunt;
    c.mode = mode;
    return c;
}

LineSample line_profile(const ModeLineConstants& consts, Complex V0, Complex Vl,
                        double len, double x) {
    const Complex g = consts.propagation;
    const Complex denom = std::sinh(g * len);
    LineSample s;
    s.V = (Vl * std::sinh(g * x) + V0 * std::sinh(g * (len - x))) / denom;
    s.I = -(consts.char_admittance / denom) *
          (Vl * std::cosh(g * x) - V0 * std::cosh(g * (len - x)));
    return s;
}

AdmittanceMatrix assemble_admittance(const Network& net, int mode) {
    const int n = static_cast<int>(net.nodes.size());
    AdmittanceMatrix adm;
    adm.mode = mode;
    adm.Y = Eigen::MatrixXcd::Zero(n, n);
    for (const Edge& e : net.edges) {
        if (adm.Y(e.start, e.end) != Complex(0.0, 0.0)) {
            throw ConfigError("admittance assembly: parallel edges between " +
                              net.nodes[e.start].id + " and " + net.nodes[e.end].id);
        }
        const ModeLineConstants c = mode_constants(e.params, mode, net.omega);
        const Complex gl = c.propagation * e.params.length;
        const Complex off = -c.char_admittance / std::sinh(gl);
        const Complex diag = c.char_admittance / std::tanh(gl);
        adm.Y(e.start, e.end) = off;
        adm.Y(e.end, e.start) = off;
        adm.Y(e.start, e.start) += diag;
        adm.Y(e.end, e.end) += diag;
    }
    return adm;
}

PhasorSolution solve_node_phasors(const Network& net, int mode) {
    const int n = static_cast<int>(net.nodes.size());
    const AdmittanceMatrix adm = assemble_admittance(net, mode);

    Eigen::VectorXcd v_fixed = Eigen::VectorXcd::Zero(n);
    Eigen::VectorXcd i_prescribed = Eigen::VectorXcd::Zero(n);
    std::vector<int> loads;
    for (int k = 0; k < n; ++k) {
        const Node& node = net.nodes[k];
        const Complex phasor =
            (mode >= 0) ? node.phasor : std::conj(node.phasor);
        if (node.kind == NodeKind::Generator) {
            v_fixed[k] = phasor;
        } else {
            i_prescribed[k] = phasor;
            loads.push_back(k);
        }
    }

    PhasorSolution sol;
    sol.mode = mode;
    sol.node_voltage = v_fixed;

    const int nl = static_cast<int>(loads.size());
    if (nl > 0) {
        // Shift generator contributions to the right-hand side, then strike
        // their rows and columns.
        const Eigen::VectorXcd shifted = i_prescribed - adm.Y * v_fixed;
        Eigen::MatrixXcd reduced(nl, nl);
        Eigen::VectorXcd rhs(nl);
        for (int a = 0; a < nl; ++a) {
            rhs[a] = shifted[loads[a]];
            for (int b = 0; b < nl; ++b) reduced(a, b) = adm.Y(loads[a], loads[b]);
        }

        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(reduced);
        const double scale = reduced.cwiseAbs().maxCoeff();
        const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
        if (!(min_pivot > 1e-12 * scale)) {
            throw NumericalError("solve_node_phasors: reduced admittance matrix is "
                                 "singular (pivot ratio " +
                                 std::to_string(min_pivot / (scale > 0 ? scale : 1.0)) +
                                 ")");
        }
        const Eigen::VectorXcd v_loads = lu.solve(rhs);
        for (int a = 0; a < nl; ++a) sol.node_voltage[loads[a]] = v_loads[a];
    }

    // Relative residual of the load rows of the full nodal system.
    double resid = 0.0, denom = 0.0;
    const Eigen::VectorXcd net_current = adm.Y * sol.node_voltage;
    for (int k : loads) {
        resid = std::max(resid, std::abs(net_current[k] - i_prescribed[k]));
        denom = std::max({denom, std::abs(net_current[k]), std::abs(i_prescribed[k])});
    }
    sol.residual = denom > 0.0 ? resid / denom : resid;
    return sol;
}

std::pair<double, double> to_characteristic(double v, double i, const LineParams& p) {
    const double ratio = std::sqrt(p.C / p.L);
    return {0.5 * (i + ratio * v), 0.5 * (i - ratio * v)};
}

std::pair<double, double> evaluate_time_domain(const PhasorSolution& sol,
                                               const Network& net, int edge, double x,
                                               double t) {
    const Edge& e = net.edges[edge];
    const ModeLineConstants c = mode_constants(e.params, sol.mode, net.omega);
    const auto [V0, Vl] = sol.edge_boundary(net, edge);
    const LineSample s = line_profile(c, V0, Vl, e.params.length, x);
    const Complex rot = std::exp(Complex(0.0, sol.mode * net.omega * t));
    return {(s.V * rot).real(), (s.I * rot).real()};
}

PowerQuantities apparent_power(const PhasorSolution& sol, const AdmittanceMatrix& adm) {
    PowerQuantities p;
    p.S = sol.node_voltage.array() *
          (adm.Y.conjugate() * sol.node_voltage.conjugate()).array();
    p.P = p.S.real();
    p.Q = p.S.imag();
    return p;
}

AnalyticSolution::AnalyticSolution(const Network& net, PhasorSolution sol)
    : omega_(net.omega), sol_(std::move(sol)) {
    edges_.reserve(net.edges.size());
    for (std::size_t e = 0; e < net.edges.size(); ++e) {
        const Edge& edge = net.edges[e];
        EdgeProfile p;
        p.consts = mode_constants(edge.params, sol_.mode, net.omega);
        p.V0 = sol_.node_voltage[edge.start];
        p.Vl = sol_.node_voltage[edge.end];
        p.length = edge.params.length;
        p.char_ratio = std::sqrt(edge.params.C / edge.params.L);
        edges_.push_back(p);
    }
}

LineSample AnalyticSolution::profile(int edge, double x) const {
    const EdgeProfile& p = edges_[edge];
    return line_profile(p.consts, p.V0, p.Vl, p.length, x);
}

std::pair<double, double> AnalyticSolution::v_i(int edge, double x, double t) const {
    const LineSample s = profile(edge, x);
    const Complex rot = std::exp(Complex(0.0, sol_.mode * omega_ * t));
    return {(s.V * rot).real(), (s.I * rot).real()};
}

std::pair<double, double> AnalyticSolution::xi(int edge, double x, double t) const {
    const auto [v, i] = v_i(edge, x, t);
    const double r = edges_[edge].char_ratio;
    return {0.5 * (i + r * v), 0.5 * (i - r * v)};
}

AnalyticSolution analytic_solution(const Network& net, int mode) {
    return AnalyticSolution(net, solve_node_phasors(net, mode));
}

}  // namespace telsim
