#include "telsim/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "telsim/errors.hpp"

namespace telsim {

EdgeGrid make_edge_grid(double length, double dx_target) {
    EdgeGrid g;
    g.n_cells = std::max(4, static_cast<int>(std::lround(length / dx_target)));
    g.dx = length / g.n_cells;
    g.xi_plus.assign(g.n_cells, 0.0);
    g.xi_minus.assign(g.n_cells, 0.0);
    return g;
}

double minmod_phi(double theta) { return std::clamp(theta, 0.0, 1.0); }

OdeStepMatrix build_ode_matrix(const DerivedLineConstants& c, double dt) {
    OdeStepMatrix m;
    const double decay = std::exp(-c.damping_sum * dt);
    m.r = decay * std::cosh(c.damping_diff * dt);
    m.s = -decay * std::sinh(c.damping_diff * dt);
    m.dt = dt;
    return m;
}

void apply_ode_step(EdgeGrid& g, const OdeStepMatrix& m) {
    for (int j = 0; j < g.n_cells; ++j) {
        const double p = g.xi_plus[j], q = g.xi_minus[j];
        g.xi_plus[j] = m.r * p + m.s * q;
        g.xi_minus[j] = m.s * p + m.r * q;
    }
}

namespace {

// Damping rates of the characteristic source system. Transforming the
// voltage/current equations gives a source of half of (R/L + G/C,
// R/L - G/C); its eigenvalues are R/L and G/C, the decay rates of the
// distortionless line. The exact periodic solution satisfies the system
// with these rates, so the split ODE flow must use them.
DerivedLineConstants source_rates(const DerivedLineConstants& c) {
    DerivedLineConstants s = c;
    s.damping_sum = 0.5 * c.damping_sum;
    s.damping_diff = 0.5 * c.damping_diff;
    return s;
}

}  // namespace

void pde_step(EdgeGrid& g, const EdgeGhosts& ghosts, double courant, Limiter limiter) {
    if (!(courant >= 0.0) || courant > 1.0 + 1e-12) {
        throw NumericalError("CFL violation: courant number " + std::to_string(courant));
    }
    const double nu = courant;
    const double half_corr = 0.5 * nu * (1.0 - nu);
    const int n = g.n_cells;

    auto plus = [&](int j) -> double {
        if (j < 0) return ghosts.plus_left[-1 - j];
        if (j >= n) return ghosts.plus_right[j - n];
        return g.xi_plus[j];
    };
    auto minus = [&](int j) -> double {
        if (j < 0) return ghosts.minus_left[-1 - j];
        if (j >= n) return ghosts.minus_right[j - n];
        return g.xi_minus[j];
    };

    // Limited difference at interface j+1/2; the slope ratio compares the
    // upwind difference to it.
    auto limited_plus = [&](int j) -> double {
        const double d = plus(j + 1) - plus(j);
        if (limiter == Limiter::None) return d;
        if (d == 0.0) return 0.0;
        return minmod_phi((plus(j) - plus(j - 1)) / d) * d;
    };
    auto limited_minus = [&](int j) -> double {
        const double d = minus(j + 1) - minus(j);
        if (limiter == Limiter::None) return d;
        if (d == 0.0) return 0.0;
        return minmod_phi((minus(j + 2) - minus(j + 1)) / d) * d;
    };

    std::vector<double> new_plus(n), new_minus(n);
    for (int j = 0; j < n; ++j) {
        new_plus[j] = plus(j) - nu * (plus(j) - plus(j - 1)) -
                      half_corr * (limited_plus(j) - limited_plus(j - 1));
        new_minus[j] = minus(j) + nu * (minus(j + 1) - minus(j)) -
                       half_corr * (limited_minus(j) - limited_minus(j - 1));
    }
    g.xi_plus = std::move(new_plus);
    g.xi_minus = std::move(new_minus);
}

Simulator::Simulator(const Network& net, const SchemeConfig& scheme, BoundaryMode boundary)
    : net_(net), scheme_(scheme), boundary_(boundary), coupler_(net_) {
    if (!(scheme_.cfl > 0.0) || scheme_.cfl > 1.0) {
        throw ConfigError("cfl must lie in (0, 1]");
    }
    if (!(scheme_.dx_target > 0.0)) {
        throw ConfigError("dx_target must be positive");
    }

    consts_.reserve(net_.edges.size());
    grids_.reserve(net_.edges.size());
    double dt = std::numeric_limits<double>::infinity();
    for (const Edge& e : net_.edges) {
        consts_.push_back(derived_constants(e.params));
        grids_.push_back(make_edge_grid(e.params.length, scheme_.dx_target));
        dt = std::min(dt, grids_.back().dx / consts_.back().wave_speed);
    }
    dt_ = scheme_.cfl * dt;
    ghosts_.resize(net_.edges.size());

    half_nominal_.reserve(consts_.size());
    for (const auto& c : consts_) {
        half_nominal_.push_back(build_ode_matrix(source_rates(c), 0.5 * dt_));
    }
}

void Simulator::init_zero() {
    for (auto& g : grids_) {
        std::fill(g.xi_plus.begin(), g.xi_plus.end(), 0.0);
        std::fill(g.xi_minus.begin(), g.xi_minus.end(), 0.0);
    }
    time_ = 0.0;
}

void Simulator::init_from(const AnalyticSolution& ref) {
    for (std::size_t e = 0; e < grids_.size(); ++e) {
        EdgeGrid& g = grids_[e];
        for (int k = 0; k < g.n_cells; ++k) {
            const double x = (k + 0.5) * g.dx;
            const auto [xp, xm] = ref.xi(static_cast<int>(e), x, 0.0);
            g.xi_plus[k] = xp;
            g.xi_minus[k] = xm;
        }
    }
    time_ = 0.0;
}

std::vector<double> Simulator::boundary_values(double t) const {
    std::vector<double> values(net_.nodes.size(), 0.0);
    if (boundary_ == BoundaryMode::Homogeneous) return values;
    const Complex rot = std::exp(Complex(0.0, net_.omega * t));
    for (std::size_t k = 0; k < net_.nodes.size(); ++k) {
        values[k] = (net_.nodes[k].phasor * rot).real();
    }
    return values;
}

namespace {

// Ghost values are samples of the extended characteristic field, so the
// damping half-flow applies to them pointwise like to any cell.
void apply_ode_step(EdgeGhosts& g, const OdeStepMatrix& m) {
    const auto rotate = [&](double& p, double& q) {
        const double pp = p, qq = q;
        p = m.r * pp + m.s * qq;
        q = m.s * pp + m.r * qq;
    };
    for (int k = 0; k < 2; ++k) {
        rotate(g.plus_left[k], g.minus_left[k]);
        rotate(g.plus_right[k], g.minus_right[k]);
    }
}

}  // namespace

void Simulator::step(double h) {
    const bool nominal = (h == dt_);
    const auto half_matrix = [&](std::size_t e) {
        return nominal ? half_nominal_[e]
                       : build_ode_matrix(source_rates(consts_[e]), 0.5 * h);
    };

    // Coupling conditions hold on the physical state, so the ghosts are
    // assembled before the first damping half-step and then ride the same
    // half-flow as the interior; the transport substep sees a consistent
    // extended field.
    coupler_.assemble(grids_, boundary_values(time_), ghosts_);
    for (std::size_t e = 0; e < grids_.size(); ++e) {
        const OdeStepMatrix m = half_matrix(e);
        apply_ode_step(grids_[e], m);
        apply_ode_step(ghosts_[e], m);
    }

    for (std::size_t e = 0; e < grids_.size(); ++e) {
        pde_step(grids_[e], ghosts_[e], consts_[e].wave_speed * h / grids_[e].dx,
                 scheme_.limiter);
    }

    for (std::size_t e = 0; e < grids_.size(); ++e) {
        apply_ode_step(grids_[e], half_matrix(e));
    }
    time_ += h;
}

void Simulator::run_until(double t_end, const std::function<void(const Simulator&)>& on_step) {
    const double eps = 1e-12 * std::max(1.0, std::abs(t_end));
    while (time_ < t_end - eps) {
        step(std::min(dt_, t_end - time_));
        if (on_step) on_step(*this);
    }
}

}  // namespace telsim
