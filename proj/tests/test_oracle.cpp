#include <doctest.h>

#include <cmath>

#include "graphon/errors.hpp"
#include "graphon/oracle.hpp"

using namespace graphon;

namespace {

ClosedFormParams base_params() {
    ClosedFormParams p;
    p.eta = 3.0;
    p.theta = 1.0;
    p.sigma = 0.1;
    p.rho = 1.0;
    p.horizon = 1.0;
    p.kernel = GraphonKernel::constant();
    return p;
}

}  // namespace

TEST_CASE("terminal condition holds for every kernel") {
    ClosedFormParams p = base_params();
    const GraphonKernel kernels[] = {
        GraphonKernel::constant(), GraphonKernel::two_block(2.0, 0.5),
        GraphonKernel::star(1.0, 0.2), GraphonKernel::min_max(), GraphonKernel::power_law(-0.5)};
    for (const auto& k : kernels) {
        p.kernel = k;
        for (double u : {0.1, 0.5, 0.9}) CHECK(closed_form_Y(p, p.horizon, u) == 0.0);
    }
}

TEST_CASE("constant kernel value: (rho - 1/2) eta theta^2 (T - t)") {
    const ClosedFormParams p = base_params();
    CHECK(closed_form_Y(p, 0.0, 0.3) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(closed_form_Y(p, 0.5, 0.3) == doctest::Approx(0.75).epsilon(1e-15));
    // rho = 0 flips the sign: pure -eta/2 theta^2 (T-t)
    ClosedFormParams p0 = p;
    p0.rho = 0.0;
    CHECK(closed_form_Y(p0, 0.0, 0.3) == doctest::Approx(-1.5).epsilon(1e-15));
}

TEST_CASE("two-block values per block") {
    ClosedFormParams p = base_params();
    p.kernel = GraphonKernel::two_block(2.0, 0.5);
    // lower block: eta/2 (rho a - 1)(T-t) = 1.5 * (2 - 1) = 1.5
    CHECK(closed_form_Y(p, 0.0, 0.2) == doctest::Approx(1.5).epsilon(1e-14));
    // upper block: 1.5 * (0.5 - 1) = -0.75
    CHECK(closed_form_Y(p, 0.0, 0.8) == doctest::Approx(-0.75).epsilon(1e-14));
}

TEST_CASE("star values per block") {
    ClosedFormParams p = base_params();
    p.kernel = GraphonKernel::star(1.0, 0.2);
    // minority: (c(1-alpha) rho - 1/2) eta (T-t) = (0.8 - 0.5)*3 = 0.9
    CHECK(closed_form_Y(p, 0.0, 0.1) == doctest::Approx(0.9).epsilon(1e-14));
    // majority: (0.2 - 0.5)*3 = -0.9
    CHECK(closed_form_Y(p, 0.0, 0.7) == doctest::Approx(-0.9).epsilon(1e-14));
}

TEST_CASE("value is linear in time to maturity") {
    ClosedFormParams p = base_params();
    p.kernel = GraphonKernel::min_max();
    const double u = 0.3;
    const double y0 = closed_form_Y(p, 0.0, u);
    for (double t : {0.25, 0.5, 0.75})
        CHECK(closed_form_Y(p, t, u) == doctest::Approx(y0 * (1.0 - t)).epsilon(1e-14));
    CHECK_THROWS_AS(closed_form_Y(p, -0.1, u), DomainError);
    CHECK_THROWS_AS(closed_form_Y(p, 1.1, u), DomainError);
}

TEST_CASE("backward quadrature reproduces the closed form to machine precision") {
    ClosedFormParams p = base_params();
    const TimeGrid grid = TimeGrid::equidistant(1.0, 40);
    const GraphonKernel kernels[] = {
        GraphonKernel::constant(), GraphonKernel::two_block(2.0, 0.5),
        GraphonKernel::star(1.0, 0.2), GraphonKernel::min_max(), GraphonKernel::power_law(-0.5)};
    for (const auto& k : kernels) {
        p.kernel = k;
        for (double u : {0.05, 0.3, 0.55, 0.95}) {
            const Eigen::VectorXd y = ode_integrate_Y(k, p, grid, u);
            for (int n = 0; n <= grid.steps(); ++n)
                CHECK(std::abs(y(n) - closed_form_Y(p, grid.nodes[n], u)) < 1e-12);
        }
    }
}

TEST_CASE("equilibrium strategy") {
    ClosedFormParams p = base_params();
    CHECK(closed_form_strategy(p, 0.5) == doctest::Approx(30.0).epsilon(1e-14));
    p.sigma = 0.0;
    CHECK_THROWS_AS(closed_form_strategy(p, 0.5), DomainError);
}

TEST_CASE("finite-N strategy and bound") {
    ClosedFormParams p = base_params();
    p.sigma = 1.0;  // so the strategy is sigma-normalized: eta*theta = 3
    // N = 2, lambda_ii = 1: strategy 2/(2-1)*3 = 6, bound 1/(2-1)*3 = 3
    CHECK(finite_N_strategy(p, 0.5, 2, 1.0) == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(finite_N_error_bound(p, 0.5, 2, 1.0) == doctest::Approx(3.0).epsilon(1e-14));

    // Algebraic identity: finite-N strategy = graphon strategy + bound-sized correction.
    for (int n : {2, 5, 17, 100}) {
        const double diff = finite_N_strategy(p, 0.5, n, 1.0) - closed_form_strategy(p, 0.5);
        CHECK(diff == doctest::Approx(finite_N_error_bound(p, 0.5, n, 1.0)).epsilon(1e-12));
    }

    // N -> infinity recovers the graphon strategy.
    CHECK(finite_N_strategy(p, 0.5, 1000000, 1.0) ==
          doctest::Approx(closed_form_strategy(p, 0.5)).epsilon(1e-5));

    // Degenerate denominators are rejected.
    CHECK_THROWS_AS(finite_N_strategy(p, 0.5, 1, 1.0), DomainError);
    CHECK_THROWS_AS(finite_N_error_bound(p, 0.5, 1, 1.0), DomainError);
}

TEST_CASE("self-consistency: strategy solves the fixed point of the best response") {
    // With constant coefficients the best response to the population strategy
    // sigma*pi = eta*theta + rho * mean-field-adjustment collapses to
    // sigma*pi = eta*theta; verify the residual is zero at the closed form.
    const ClosedFormParams p = base_params();
    const double sig_pi = p.sigma * closed_form_strategy(p, 0.4);
    CHECK(std::abs(sig_pi - p.eta * p.theta) < 1e-12);
}
