#include "graphon/oracle.hpp"

#include <cmath>

#include "graphon/errors.hpp"

namespace graphon {

// The driver of the Y-equation at Z = 0 is
//   f(u) = eta/2 * theta^2 - rho*eta*theta^2 * degree(u),
// constant in time, so Y_t^u = -f(u) * (T - t). For the block kernels this
// reduces to the familiar per-block lines, e.g. (rho - 1/2)*eta*(T-t) for the
// constant kernel.
double closed_form_Y(const ClosedFormParams& p, double t, double u) {
    if (t < 0.0 || t > p.horizon) throw DomainError("closed_form_Y: t outside [0,T]");
    const double th2 = p.theta * p.theta;
    const double driver = p.eta / 2.0 * th2 - p.rho * p.eta * th2 * p.kernel.degree(u);
    return -driver * (p.horizon - t);
}

double closed_form_strategy(const ClosedFormParams& p, double u) {
    if (p.sigma == 0.0) throw DomainError("closed_form_strategy: sigma must be nonzero");
    (void)u;  // constant eta regime; kept for the per-label signature
    return p.eta * p.theta / p.sigma;
}

double finite_N_strategy(const ClosedFormParams& p, double u, int n_players, double lambda_ii) {
    if (n_players < 1) throw DomainError("finite_N_strategy: N must be >= 1");
    const double denom = n_players - p.rho * lambda_ii;
    if (denom <= 0.0) throw DomainError("finite_N_strategy: need N > rho*lambda_ii");
    return static_cast<double>(n_players) / denom * closed_form_strategy(p, u);
}

double finite_N_error_bound(const ClosedFormParams& p, double u, int n_players, double lambda_ii) {
    if (n_players < 1) throw DomainError("finite_N_error_bound: N must be >= 1");
    const double denom = n_players - p.rho * lambda_ii;
    if (denom <= 0.0) throw DomainError("finite_N_error_bound: need N > rho*lambda_ii");
    (void)u;
    return p.rho * lambda_ii / denom * std::abs(p.eta * p.theta);
}

Eigen::VectorXd ode_integrate_Y(const GraphonKernel& kernel, const ClosedFormParams& p,
                                const TimeGrid& grid, double u) {
    const int steps = grid.steps();
    const double th2 = p.theta * p.theta;
    const double driver = p.eta / 2.0 * th2 - p.rho * p.eta * th2 * kernel.degree(u);
    Eigen::VectorXd y(steps + 1);
    y(steps) = 0.0;  // terminal condition
    for (int n = steps - 1; n >= 0; --n) y(n) = y(n + 1) - driver * grid.dt(n);
    return y;
}

}  // namespace graphon
