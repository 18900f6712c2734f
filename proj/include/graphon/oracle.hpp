#ifndef GRAPHON_ORACLE_HPP
#define GRAPHON_ORACLE_HPP

#include <Eigen/Core>

#include "graphon/kernels.hpp"
#include "graphon/market.hpp"

namespace graphon {

/// Constant-coefficient regime in which the equilibrium is known in closed form.
struct ClosedFormParams {
    double eta = 3.0;
    double theta = 1.0;
    double sigma = 0.1;
    double rho = 1.0;
    double horizon = 1.0;
    GraphonKernel kernel = GraphonKernel::constant();
};

/// Exact value process: Y_t^u = (rho*eta*theta^2*degree(u) - eta*theta^2/2)(T - t).
/// Specializes to the per-kernel formulas for the block kernels and uses the
/// analytic degree for the continuous ones.
double closed_form_Y(const ClosedFormParams& p, double t, double u);

/// Equilibrium strategy pi = eta*theta/sigma, constant in time.
double closed_form_strategy(const ClosedFormParams& p, double u);

/// N-player equilibrium with self-weight lambda_ii, and the distance bound to
/// the graphon strategy.
double finite_N_strategy(const ClosedFormParams& p, double u, int n_players, double lambda_ii);
double finite_N_error_bound(const ClosedFormParams& p, double u, int n_players, double lambda_ii);

/// Brute-force backward quadrature of the Y driver with Z = 0; matches
/// closed_form_Y on grid nodes to machine precision for constant coefficients.
Eigen::VectorXd ode_integrate_Y(const GraphonKernel& kernel, const ClosedFormParams& p,
                                const TimeGrid& grid, double u);

}  // namespace graphon

#endif
