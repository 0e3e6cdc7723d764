#pragma once

#include <array>
#include <vector>

namespace telsim {

/// Characteristic state of one edge on a cell-centered grid,
/// x_k = (k + 1/2) dx for k = 0..n_cells-1, with dx * n_cells equal to
/// the edge length. At least four cells so both ends can extrapolate
/// from two interior values.
struct EdgeGrid {
    int n_cells = 0;
    double dx = 0.0;
    std::vector<double> xi_plus;
    std::vector<double> xi_minus;
};

/// n = max(4, round(length / dx_target)), dx = length / n.
EdgeGrid make_edge_grid(double length, double dx_target);

/// Ghost values on the lattice just outside each end, nearest the
/// boundary first: index 0 sits half a cell outside, index 1 one cell
/// further. Populated per step by the node coupling.
struct EdgeGhosts {
    std::array<double, 2> plus_left{};    // xi+ at -dx/2, -3dx/2
    std::array<double, 2> minus_left{};   // xi- at -dx/2, -3dx/2
    std::array<double, 2> plus_right{};   // xi+ at len+dx/2, len+3dx/2
    std::array<double, 2> minus_right{};  // xi- at len+dx/2, len+3dx/2
};

}  // namespace telsim
