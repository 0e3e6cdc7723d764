#include "telsim/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace telsim {

double lyapunov(const std::vector<EdgeGrid>& state) {
    double total = 0.0;
    for (const EdgeGrid& g : state) {
        double acc = 0.0;
        for (int j = 0; j < g.n_cells; ++j) {
            acc += g.xi_plus[j] * g.xi_plus[j] + g.xi_minus[j] * g.xi_minus[j];
        }
        total += 0.5 * g.dx * acc;
    }
    return total;
}

double physical_energy(const std::vector<EdgeGrid>& state, const Network& net) {
    double total = 0.0;
    for (std::size_t e = 0; e < state.size(); ++e) {
        const EdgeGrid& g = state[e];
        const LineParams& p = net.edges[e].params;
        const double c = std::sqrt(p.L / p.C);
        double acc = 0.0;
        for (int j = 0; j < g.n_cells; ++j) {
            const double v = c * (g.xi_plus[j] - g.xi_minus[j]);
            const double i = g.xi_plus[j] + g.xi_minus[j];
            acc += p.C * v * v + p.L * i * i;
        }
        total += 0.5 * g.dx * acc;
    }
    return total;
}

double total_variation(const EdgeGrid& g) {
    double tv = 0.0;
    for (int j = 0; j + 1 < g.n_cells; ++j) {
        tv += std::abs(g.xi_plus[j + 1] - g.xi_plus[j]) +
              std::abs(g.xi_minus[j + 1] - g.xi_minus[j]);
    }
    return tv;
}

double total_variation(const std::vector<EdgeGrid>& state) {
    double tv = 0.0;
    for (const EdgeGrid& g : state) tv += total_variation(g);
    return tv;
}

double decay_rate(const Network& net) {
    double mu = std::numeric_limits<double>::infinity();
    for (const Edge& e : net.edges) {
        mu = std::min(mu, std::min(e.params.R / e.params.L, e.params.G / e.params.C));
    }
    return mu;
}

double analytic_decay_bound(const Network& net, double v0, double t) {
    return v0 * std::exp(-2.0 * decay_rate(net) * t);
}

std::vector<double> convergence_orders(
    const std::vector<std::pair<double, double>>& levels) {
    std::vector<double> orders;
    for (std::size_t i = 1; i < levels.size(); ++i) {
        const auto& [dx_prev, err_prev] = levels[i - 1];
        const auto& [dx, err] = levels[i];
        if (!(err_prev > 0.0) || !(err > 0.0)) {
            throw std::invalid_argument("convergence_orders: errors must be positive");
        }
        if (!(dx < dx_prev)) {
            throw std::invalid_argument("convergence_orders: dx must decrease");
        }
        orders.push_back(std::log(err_prev / err) / std::log(dx_prev / dx));
    }
    return orders;
}

ErrorTracker::ErrorTracker(const AnalyticSolution& ref, const std::vector<EdgeGrid>& grids)
    : omega_(ref.omega()), mode_(ref.phasors().mode) {
    edges_.resize(grids.size());
    for (std::size_t e = 0; e < grids.size(); ++e) {
        const EdgeGrid& g = grids[e];
        EdgeSamples& s = edges_[e];
        s.V.resize(g.n_cells);
        s.I.resize(g.n_cells);
        for (int k = 0; k < g.n_cells; ++k) {
            const LineSample sample = ref.profile(static_cast<int>(e), (k + 0.5) * g.dx);
            s.V[k] = sample.V;
            s.I[k] = sample.I;
        }
        s.char_ratio = ref.char_ratio(static_cast<int>(e));
    }
}

double ErrorTracker::observe(const std::vector<EdgeGrid>& state, double t) {
    const Complex rot = std::exp(Complex(0.0, mode_ * omega_ * t));
    double step_max = 0.0;
    for (std::size_t e = 0; e < state.size(); ++e) {
        const EdgeGrid& g = state[e];
        const EdgeSamples& s = edges_[e];
        for (int k = 0; k < g.n_cells; ++k) {
            const double v = (s.V[k] * rot).real();
            const double i = (s.I[k] * rot).real();
            const double zp = 0.5 * (i + s.char_ratio * v);
            const double zm = 0.5 * (i - s.char_ratio * v);
            step_max = std::max(step_max, std::abs(g.xi_plus[k] - zp));
            step_max = std::max(step_max, std::abs(g.xi_minus[k] - zm));
        }
    }
    max_err_ = std::max(max_err_, step_max);
    return step_max;
}

double log_slope(const std::vector<double>& times, const std::vector<double>& values) {
    const std::size_t n = times.size();
    double st = 0.0, sv = 0.0, stt = 0.0, stv = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double lv = std::log(values[k]);
        st += times[k];
        sv += lv;
        stt += times[k] * times[k];
        stv += times[k] * lv;
    }
    return (n * stv - st * sv) / (n * stt - st * st);
}

}  // namespace telsim
