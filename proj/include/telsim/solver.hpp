#pragma once

#include <functional>
#include <vector>

#include "telsim/analytic.hpp"
#include "telsim/coupling.hpp"
#include "telsim/grid.hpp"
#include "telsim/network.hpp"

namespace telsim {

enum class Limiter { Minmod, None };

/// phi(theta) = clamp(theta, 0, 1).
double minmod_phi(double theta);

/// Exact step of the damping subsystem, M = exp(-B dt) for
/// B = [[a, b], [b, a]]: r = e^{-a dt} cosh(b dt), s = -e^{-a dt} sinh(b dt).
/// Eigenvalues r +- s = e^{-(a+b) dt}, e^{-(a-b) dt} lie in (0, 1] for
/// dt >= 0.
struct OdeStepMatrix {
    double r = 1.0;
    double s = 0.0;
    double dt = 0.0;
};

OdeStepMatrix build_ode_matrix(const DerivedLineConstants& consts, double dt);

/// Multiplies every cell's (xi+, xi-) pair by M. No spatial coupling.
void apply_ode_step(EdgeGrid& grid, const OdeStepMatrix& m);

/// One flux-limited Lax-Wendroff transport step on both families, with
/// courant = wave_speed * dt / dx. Throws NumericalError when the CFL
/// condition courant <= 1 is violated. Limiter::None runs the classical
/// Lax-Wendroff correction (phi == 1); zero interface differences make
/// the limited correction vanish before any slope ratio is formed.
void pde_step(EdgeGrid& grid, const EdgeGhosts& ghosts, double courant, Limiter limiter);

struct SchemeConfig {
    Limiter limiter = Limiter::Minmod;
    double cfl = 0.8;         // target of max_e |lambda_e| dt / dx_e, in (0, 1]
    double dx_target = 0.05;  // per-edge dx rounds so cells tile the length
    double t_end = 1.0;
};

enum class InitMode { Zero, Analytic };
enum class BoundaryMode { Prescribed, Homogeneous };

/// Strang-split integrator for the whole network: a half ODE step, a
/// transport step with node coupling, another half ODE step. One global
/// dt keeps the edges synchronous; the final step shrinks to land on the
/// requested horizon exactly.
class Simulator {
  public:
    Simulator(const Network& net, const SchemeConfig& scheme,
              BoundaryMode boundary = BoundaryMode::Prescribed);

    void init_zero();
    void init_from(const AnalyticSolution& ref);  // sample the reference at t = 0

    void step() { step(dt_); }
    void step(double h);
    void run_until(double t_end,
                   const std::function<void(const Simulator&)>& on_step = {});

    double dt() const { return dt_; }
    double time() const { return time_; }
    const Network& network() const { return net_; }
    const std::vector<EdgeGrid>& state() const { return grids_; }
    std::vector<EdgeGrid>& state() { return grids_; }
    const std::vector<DerivedLineConstants>& line_constants() const { return consts_; }

  private:
    std::vector<double> boundary_values(double t) const;

    Network net_;
    SchemeConfig scheme_;
    BoundaryMode boundary_;
    NodeCoupler coupler_;
    std::vector<DerivedLineConstants> consts_;
    std::vector<EdgeGrid> grids_;
    std::vector<EdgeGhosts> ghosts_;
    std::vector<OdeStepMatrix> half_nominal_;  // cached ODE half-steps for dt_
    double dt_ = 0.0;
    double time_ = 0.0;
};

}  // namespace telsim
