#include <doctest.h>

#include <cmath>
#include <vector>

#include "telsim/diagnostics.hpp"
#include "telsim/solver.hpp"
#include "test_util.hpp"

using namespace telsim;

TEST_SUITE_BEGIN("diagnostics");

TEST_CASE("lyapunov of simple states") {
    SUBCASE("zero state") {
        std::vector<EdgeGrid> state{make_edge_grid(1.0, 0.25)};
        CHECK(lyapunov(state) == 0.0);
    }
    SUBCASE("single unit cell") {
        EdgeGrid g;
        g.n_cells = 1;
        g.dx = 1.0;
        g.xi_plus = {1.0};
        g.xi_minus = {1.0};
        CHECK(lyapunov({g}) == 1.0);
    }
}

TEST_CASE("total variation of simple states") {
    EdgeGrid g = make_edge_grid(2.0, 0.25);
    CHECK(total_variation(g) == 0.0);
    g.xi_plus[4] = 0.75;  // one spike: up and back down
    CHECK(total_variation(g) == doctest::Approx(1.5).epsilon(1e-15));
    std::fill(g.xi_plus.begin() + 4, g.xi_plus.end(), 0.75);  // single jump
    CHECK(total_variation(g) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("decay envelope from the line parameters") {
    SUBCASE("single line") {
        const Network net = test::single_line();
        CHECK(decay_rate(net) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
        CHECK(analytic_decay_bound(net, 5.0, 0.0) == 5.0);
        CHECK(analytic_decay_bound(net, 5.0, 1.5) ==
              doctest::Approx(5.0 * std::exp(-2.0)).epsilon(1e-14));
    }
    SUBCASE("star network is limited by its weakest line") {
        const Network net = test::three_spoke();
        CHECK(decay_rate(net) == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
        CHECK(analytic_decay_bound(net, 1.0, 9.0) ==
              doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
    }
}

TEST_CASE("convergence order estimates") {
    SUBCASE("planted first order") {
        std::vector<std::pair<double, double>> levels;
        for (int i = 1; i <= 6; ++i) {
            levels.emplace_back(std::ldexp(1.0, -i), 0.37 * std::ldexp(1.0, -i));
        }
        for (double c : convergence_orders(levels)) {
            CHECK(c == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    SUBCASE("planted second order") {
        std::vector<std::pair<double, double>> levels;
        for (int i = 1; i <= 6; ++i) {
            const double dx = std::ldexp(1.0, -i);
            levels.emplace_back(dx, 0.9 * dx * dx);
        }
        for (double c : convergence_orders(levels)) {
            CHECK(c == doctest::Approx(2.0).epsilon(1e-12));
        }
    }
    SUBCASE("rejects non-positive errors and non-decreasing dx") {
        CHECK_THROWS_AS(convergence_orders({{0.5, 1.0}, {0.25, 0.0}}),
                        std::invalid_argument);
        CHECK_THROWS_AS(convergence_orders({{0.25, 1.0}, {0.5, 0.5}}),
                        std::invalid_argument);
    }
    SUBCASE("single level yields no estimates") {
        CHECK(convergence_orders({{0.5, 1.0}}).empty());
    }
}

TEST_CASE("error tracker against the sampled reference") {
    const Network net = test::single_line();
    const AnalyticSolution ref = analytic_solution(net, 1);
    SchemeConfig scheme;
    scheme.dx_target = 1.0 / 32;
    Simulator sim(net, scheme);
    sim.init_from(ref);

    ErrorTracker tracker(ref, sim.state());
    SUBCASE("sampled state has zero error") {
        CHECK(tracker.observe(sim.state(), 0.0) <= 1e-15);
    }
    SUBCASE("a single-cell perturbation is picked up exactly") {
        auto state = sim.state();
        state[0].xi_plus[7] += 3e-4;
        CHECK(tracker.observe(state, 0.0) == doctest::Approx(3e-4).epsilon(1e-9));
    }
    SUBCASE("max is kept across observations") {
        auto state = sim.state();
        state[0].xi_minus[3] -= 2e-3;
        tracker.observe(state, 0.0);
        CHECK(tracker.observe(sim.state(), 0.0) <= 1e-15);
        CHECK(tracker.max_error() == doctest::Approx(2e-3).epsilon(1e-9));
    }
}

TEST_CASE("log slope of an exact exponential") {
    std::vector<double> times, values;
    for (int k = 0; k <= 40; ++k) {
        times.push_back(0.25 * k);
        values.push_back(3.2 * std::exp(-0.7 * 0.25 * k));
    }
    CHECK(log_slope(times, values) == doctest::Approx(-0.7).epsilon(1e-12));
}

TEST_CASE("homogeneous runs dissipate the lyapunov value") {
    const Network net = test::three_spoke();
    SchemeConfig scheme;
    scheme.dx_target = 1.0 / 16;
    scheme.limiter = Limiter::Minmod;
    Simulator sim(net, scheme, BoundaryMode::Homogeneous);
    sim.init_from(analytic_solution(net, 1));

    const double initial = lyapunov(sim.state());
    double previous = initial;
    CHECK(initial > 0.0);
    sim.run_until(2.0, [&](const Simulator& s) {
        const double current = lyapunov(s.state());
        CHECK(current <= previous * (1.0 + 1e-10));
        previous = current;
    });
    CHECK(previous == lyapunov(sim.state()));
    CHECK(previous < 0.9 * initial);
}

TEST_CASE("total variation decays once the boundary transient has entered") {
    // Switching the periodic initial state to homogeneous boundary data
    // injects variation on the first step; afterwards the minmod scheme
    // and the damping keep TV non-increasing.
    const Network net = test::three_spoke();
    SchemeConfig scheme;
    scheme.dx_target = 1.0 / 16;
    scheme.limiter = Limiter::Minmod;
    Simulator sim(net, scheme, BoundaryMode::Homogeneous);
    sim.init_from(analytic_solution(net, 1));
    sim.step();

    double previous = total_variation(sim.state());
    sim.run_until(3.0, [&](const Simulator& s) {
        const double tv = total_variation(s.state());
        CHECK(tv <= previous * (1.0 + 1e-10));
        previous = tv;
    });
}

TEST_CASE("max error is invariant under edge relabeling") {
    const Network net = test::three_spoke();
    Network relabeled = net;
    std::swap(relabeled.edges[0], relabeled.edges[2]);

    SchemeConfig scheme;
    scheme.dx_target = 1.0 / 16;

    auto run_error = [&](const Network& n) {
        const AnalyticSolution ref = analytic_solution(n, 1);
        Simulator sim(n, scheme);
        sim.init_from(ref);
        ErrorTracker tracker(ref, sim.state());
        sim.run_until(0.5, [&](const Simulator& s) { tracker.observe(s.state(), s.time()); });
        return tracker.max_error();
    };

    const double base = run_error(net);
    const double permuted = run_error(relabeled);
    CHECK(base == doctest::Approx(permuted).epsilon(1e-12));
}

TEST_CASE("physical energy tracks the characteristic form") {
    const Network net = test::single_line();
    SchemeConfig scheme;
    scheme.dx_target = 0.125;
    Simulator sim(net, scheme);
    sim.init_from(analytic_solution(net, 1));
    // For L = 6, C = 1 the physical density is 2L (xi+^2 + xi-^2), so the
    // two functionals differ by the factor 2L.
    CHECK(physical_energy(sim.state(), net) ==
          doctest::Approx(12.0 * lyapunov(sim.state())).epsilon(1e-12));
}

TEST_SUITE_END();
