#ifndef GRAPHON_MARKET_HPP
#define GRAPHON_MARKET_HPP

#include <Eigen/Core>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace graphon {

/// Discretization of [0,T] into n_star subintervals.
struct TimeGrid {
    double horizon = 1.0;
    std::vector<double> nodes;  // t_0 = 0 < ... < t_{n_star} = T

    static TimeGrid equidistant(double T, int n_star);
    static TimeGrid from_nodes(std::vector<double> nodes);

    int steps() const { return static_cast<int>(nodes.size()) - 1; }
    double dt(int n) const { return nodes[n + 1] - nodes[n]; }
    /// Index of a node equal to t; off-grid times are a domain error.
    int node_index(double t) const;
};

enum class MarketKind { ConstantBS, MarkovianBS };
enum class EtaKind { Constant, BetaUOneMinusU, BetaU };

/// Per-label risk aversion: constant eta, beta*u*(1-u), or beta*u.
struct EtaSpec {
    EtaKind kind = EtaKind::Constant;
    double value = 3.0;  // constant eta
    double beta = 1.0;   // scale for the function families

    double operator()(double u) const;
};

/// Coefficients (sigma, theta, eta) and initial wealth law; d = 1 asset.
struct MarketModel {
    MarketKind kind = MarketKind::ConstantBS;
    double sigma = 0.1;
    double theta_const = 1.0;  // ConstantBS only; MarkovianBS uses theta_t = W_t
    EtaSpec eta_spec;
    double rho = 1.0;
    double xi_const = 0.0;  // initial wealth, constant law
    int asset_dim = 1;

    void validate() const;
    double eta(double u) const { return eta_spec(u); }
};

/// Labels, initial wealths, and Brownian increments for M particles on a grid.
struct Batch {
    Eigen::VectorXd labels;  // M, in [0,1]
    Eigen::VectorXd x0;      // M
    Eigen::MatrixXd dw;      // M x n_star, increments N(0, dt_n)
    Eigen::MatrixXd w;       // M x (n_star+1), cumulative path, w(:,0) = 0
    std::uint64_t seed = 0;

    int particles() const { return static_cast<int>(labels.size()); }
};

/// Labels i.i.d. Uniform[0,1], X_0 from the xi law, increments N(0, dt_n);
/// the three families mutually independent.
Batch sample_batch(const MarketModel& model, const TimeGrid& grid, int particles,
                   std::mt19937_64& rng);

/// Same, but with equispaced labels (k+1/2)/M so validation curves over u are
/// smooth; noise still seeded.
Batch sample_label_grid_batch(const MarketModel& model, const TimeGrid& grid, int particles,
                              std::mt19937_64& rng);

/// Market price of risk at a grid node for one batch entry.
double theta_at(const MarketModel& model, const TimeGrid& grid, double t, const Batch& batch,
                int particle);

/// All particles' theta at node n, as a vector.
Eigen::VectorXd theta_column(const MarketModel& model, const Batch& batch, int node);

}  // namespace graphon

#endif
