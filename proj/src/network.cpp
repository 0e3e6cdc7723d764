#include "telsim/network.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace telsim {

int Network::node_index(std::string_view id) const {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].id == id) return static_cast<int>(i);
    }
    return -1;
}

namespace {

void check_positive(std::vector<std::string>& out, double value, const char* what,
                    int edge_index) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        std::ostringstream ss;
        ss << "non-positive parameter: edge " << edge_index << " has " << what << " = "
           << value;
        out.push_back(ss.str());
    }
}

}  // namespace

ValidationReport validate(const Network& net) {
    ValidationReport report;
    auto& v = report.violations;

    if (!(net.omega > 0.0) || !std::isfinite(net.omega)) {
        v.push_back("omega must be positive");
    }

    std::set<std::string> seen;
    for (const auto& node : net.nodes) {
        if (!seen.insert(node.id).second) {
            v.push_back("duplicate node id: " + node.id);
        }
    }

    const int n = static_cast<int>(net.nodes.size());
    std::vector<int> degree(net.nodes.size(), 0);
    for (std::size_t e = 0; e < net.edges.size(); ++e) {
        const Edge& edge = net.edges[e];
        const int idx = static_cast<int>(e);
        if (edge.start < 0 || edge.start >= n || edge.end < 0 || edge.end >= n) {
            std::ostringstream ss;
            ss << "dangling edge: edge " << idx << " references a missing node";
            v.push_back(ss.str());
            continue;
        }
        if (edge.start == edge.end) {
            std::ostringstream ss;
            ss << "self-loop: edge " << idx << " starts and ends at "
               << net.nodes[edge.start].id;
            v.push_back(ss.str());
        }
        ++degree[edge.start];
        ++degree[edge.end];
        check_positive(v, edge.params.R, "R", idx);
        check_positive(v, edge.params.L, "L", idx);
        check_positive(v, edge.params.G, "G", idx);
        check_positive(v, edge.params.C, "C", idx);
        check_positive(v, edge.params.length, "length", idx);
    }

    for (std::size_t i = 0; i < net.nodes.size(); ++i) {
        if (degree[i] == 0) {
            v.push_back("isolated node: " + net.nodes[i].id + " has no incident edge");
        }
    }

    // Connectivity over the undirected graph, ignoring malformed edges.
    if (!net.nodes.empty()) {
        std::vector<char> reached(net.nodes.size(), 0);
        std::vector<int> stack{0};
        reached[0] = 1;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (const Edge& edge : net.edges) {
                if (edge.start < 0 || edge.start >= n || edge.end < 0 || edge.end >= n)
                    continue;
                int other = -1;
                if (edge.start == u) other = edge.end;
                if (edge.end == u) other = edge.start;
                if (other >= 0 && !reached[other]) {
                    reached[other] = 1;
                    stack.push_back(other);
                }
            }
        }
        for (std::size_t i = 0; i < reached.size(); ++i) {
            if (!reached[i]) {
                v.push_back("disconnected graph: node " + net.nodes[i].id +
                            " is unreachable from " + net.nodes[0].id);
            }
        }
    }

    return report;
}

DerivedLineConstants derived_constants(const LineParams& p) {
    DerivedLineConstants d;
    d.wave_speed = 1.0 / std::sqrt(p.L * p.C);
    d.surge_impedance = std::sqrt(p.L / p.C);
    d.damping_sum = p.R / p.L + p.G / p.C;
    d.damping_diff = p.R / p.L - p.G / p.C;
    return d;
}

int orientation_sign(const Edge& edge, int node) {
    if (node == edge.end) return 1;
    if (node == edge.start) return -1;
    throw std::invalid_argument("orientation_sign: node not incident to edge");
}

}  // namespace telsim
