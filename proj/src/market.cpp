#include "graphon/market.hpp"

#include <cmath>

#include "graphon/errors.hpp"

namespace graphon {

TimeGrid TimeGrid::equidistant(double T, int n_star) {
    if (T <= 0.0) throw ConfigError("TimeGrid: horizon must be positive");
    if (n_star < 1) throw ConfigError("TimeGrid: n_star must be >= 1");
    TimeGrid g;
    g.horizon = T;
    g.nodes.resize(n_star + 1);
    for (int n = 0; n <= n_star; ++n) g.nodes[n] = T * static_cast<double>(n) / n_star;
    g.nodes.back() = T;
    return g;
}

TimeGrid TimeGrid::from_nodes(std::vector<double> nodes) {
    if (nodes.size() < 2 || nodes.front() != 0.0)
        throw ConfigError("TimeGrid: need t_0 = 0 and at least one step");
    for (std::size_t n = 1; n < nodes.size(); ++n)
        if (nodes[n] <= nodes[n - 1]) throw ConfigError("TimeGrid: nodes must strictly increase");
    TimeGrid g;
    g.horizon = nodes.back();
    g.nodes = std::move(nodes);
    return g;
}

int TimeGrid::node_index(double t) const {
    for (std::size_t n = 0; n < nodes.size(); ++n)
        if (std::abs(nodes[n] - t) <= 1e-12 * std::max(1.0, horizon)) return static_cast<int>(n);
    throw DomainError("TimeGrid: time " + std::to_string(t) + " is not a grid node");
}

double EtaSpec::operator()(double u) const {
    if (!(u >= 0.0 && u <= 1.0))
        throw DomainError("eta: label " + std::to_string(u) + " outside [0,1]");
    switch (kind) {
        case EtaKind::Constant: return value;
        case EtaKind::BetaUOneMinusU: return beta * u * (1.0 - u);
        case EtaKind::BetaU: return beta * u;
    }
    throw ConfigError("EtaSpec: bad kind");
}

void MarketModel::validate() const {
    if (sigma <= 0.0) throw ConfigError("MarketModel: sigma must be positive");
    if (rho < 0.0 || rho > 1.0) throw ConfigError("MarketModel: rho must lie in [0,1]");
    if (eta_spec.kind == EtaKind::Constant && eta_spec.value <= 0.0)
        throw ConfigError("MarketModel: constant eta must be positive");
    if (asset_dim != 1) throw ConfigError("MarketModel: only d = 1 is supported");
}

namespace {

Batch sample_impl(const MarketModel& model, const TimeGrid& grid, int particles,
                  std::mt19937_64& rng, bool label_grid) {
    if (particles < 1) throw ConfigError("sample_batch: need at least one particle");
    const int steps = grid.steps();
    Batch b;
    b.labels.resize(particles);
    b.x0.resize(particles);
    b.dw.resize(particles, steps);
    b.w.resize(particles, steps + 1);

    std::uniform_real_distribution<double> unif(0.0, 1.0);
    if (label_grid) {
        for (int i = 0; i < particles; ++i) b.labels(i) = (i + 0.5) / particles;
    } else {
        for (int i = 0; i < particles; ++i) b.labels(i) = unif(rng);
    }
    for (int i = 0; i < particles; ++i) b.x0(i) = model.xi_const;

    std::normal_distribution<double> normal(0.0, 1.0);
    b.w.col(0).setZero();
    for (int n = 0; n < steps; ++n) {
        const double sd = std::sqrt(grid.dt(n));
        for (int i = 0; i < particles; ++i) {
            b.dw(i, n) = sd * normal(rng);
            b.w(i, n + 1) = b.w(i, n) + b.dw(i, n);
        }
    }
    return b;
}

}  // namespace

Batch sample_batch(const MarketModel& model, const TimeGrid& grid, int particles,
                   std::mt19937_64& rng) {
    return sample_impl(model, grid, particles, rng, false);
}

Batch sample_label_grid_batch(const MarketModel& model, const TimeGrid& grid, int particles,
                              std::mt19937_64& rng) {
    return sample_impl(model, grid, particles, rng, true);
}

double theta_at(const MarketModel& model, const TimeGrid& grid, double t, const Batch& batch,
                int particle) {
    const int n = grid.node_index(t);
    if (model.kind == MarketKind::ConstantBS) return model.theta_const;
    return batch.w(particle, n);
}

Eigen::VectorXd theta_column(const MarketModel& model, const Batch& batch, int node) {
    if (model.kind == MarketKind::ConstantBS)
        return Eigen::VectorXd::Constant(batch.particles(), model.theta_const);
    return batch.w.col(node);
}

}  // namespace graphon
