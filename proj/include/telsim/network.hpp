#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

namespace telsim {

using Complex = std::complex<double>;

/// Per-length line constants plus the length of the line.
/// Units are carried as documentation only; any consistent system works
/// (the bundled configs mix dimensionless test values and km-based SI).
struct LineParams {
    double R;       // series resistance per length (Ohm/km)
    double L;       // series inductance per length (H/km)
    double G;       // shunt conductance per length (S/km)
    double C;       // shunt capacitance per length (F/km)
    double length;  // line length (km)
};

/// Constants of the characteristic form of a line.
struct DerivedLineConstants {
    double wave_speed;       // 1/sqrt(L*C)
    double surge_impedance;  // sqrt(L/C); voltage = surge_impedance * (xi+ - xi-)
    double damping_sum;      // R/L + G/C
    double damping_diff;     // R/L - G/C
};

enum class NodeKind { Generator, Load };

/// Generators prescribe a voltage phasor, loads a net-current phasor.
/// The time signal at the node is Re(phasor * exp(j*omega*t)).
struct Node {
    std::string id;
    NodeKind kind = NodeKind::Load;
    Complex phasor{0.0, 0.0};
};

struct Edge {
    int start = -1;  // node index into Network::nodes
    int end = -1;
    LineParams params{};
};

/// Directed graph of nodes and transmission lines sharing one angular
/// frequency. Node indices follow config order so that matrix row
/// ordering is reproducible. Immutable after construction by convention.
struct Network {
    std::vector<Node> nodes;
    std::vector<Edge> edges;
    double omega = 0.0;  // angular frequency (rad/s)

    int node_index(std::string_view id) const;
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/// Structural and parameter checks: strict positivity of R, L, G, C,
/// length and omega, endpoint existence, no self-loops, unique ids,
/// no isolated nodes, connectedness.
ValidationReport validate(const Network& net);

DerivedLineConstants derived_constants(const LineParams& params);

/// +1 if the node is the edge's end, -1 if it is the start.
/// Throws std::invalid_argument if the node is not an endpoint.
int orientation_sign(const Edge& edge, int node);

}  // namespace telsim
