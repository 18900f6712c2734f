#ifndef GRAPHON_SIM_HPP
#define GRAPHON_SIM_HPP

#include <Eigen/Core>
#include <optional>
#include <random>
#include <vector>

#include "graphon/kernels.hpp"
#include "graphon/market.hpp"
#include "graphon/mlp.hpp"

namespace graphon {

/// The trainable control pair: the y0-network (inputs u, X_0) and either a
/// single z-network with inputs (t/T, u, X) or one z-network per time step
/// with inputs (u, X).
struct Controls {
    Mlp y0_net;
    std::vector<Mlp> z_nets;  // size 1, or n_star in per-timestep mode
    bool per_timestep = false;

    static Controls make(const std::vector<int>& hidden_widths, bool per_timestep, int n_star,
                         std::mt19937_64& rng);

    const Mlp& z_net(int node) const { return z_nets[per_timestep ? node : 0]; }
    Mlp& z_net(int node) { return z_nets[per_timestep ? node : 0]; }
    std::vector<Mlp> all_nets() const;
    static Controls from_nets(std::vector<Mlp> nets, bool per_timestep);
};

/// Gradient of a scalar loss w.r.t. every parameter of a Controls pair.
struct ControlsGrad {
    MlpGrad y0;
    std::vector<MlpGrad> z;
};

/// Optimizer state for a Controls pair.
struct ControlsAdam {
    AdamState y0;
    std::vector<AdamState> z;

    static ControlsAdam init(const Controls& c, const AdamConfig& cfg);
    void set_learning_rate(double lr);
};

void adam_step(Controls& c, const ControlsGrad& g, ControlsAdam& state);

/// State paths of one rollout: X, Y on nodes 0..n*, and Z, pi, mean-field on
/// nodes 0..n*-1, all M x (columns = nodes).
struct Trajectory {
    Eigen::VectorXd labels;
    Eigen::MatrixXd x;   // M x (n*+1)
    Eigen::MatrixXd y;   // M x (n*+1)
    Eigen::MatrixXd z;   // M x n*
    Eigen::MatrixXd pi;  // M x n*
    Eigen::MatrixXd mf;  // M x n*
};

struct RolloutOptions {
    // Y/Z dynamics never read X in the supported models; disabling the X
    // update leaves them untouched (tested invariant).
    bool freeze_x = false;
    // Replace the live graphon interaction with a precomputed field (per
    // particle and node); used for best-response training.
    const Eigen::MatrixXd* frozen_mean_field = nullptr;
    double blowup_threshold = 1e6;
};

/// Monte Carlo graphon interaction for one label:
/// (1/M) sum_j rho*(z_j + eta(v_j)*theta_n^j)*theta_n^j*G(u, v_j).
double mean_field_term(const GraphonKernel& kernel, const MarketModel& model,
                       const TimeGrid& grid, double t, const Batch& batch,
                       const Eigen::VectorXd& z_values, double u);

/// Euler-Maruyama rollout of the controlled (X, Y) system over the batch.
Trajectory rollout(const Controls& controls, const GraphonKernel& kernel,
                   const MarketModel& model, const TimeGrid& grid, const Batch& batch,
                   const RolloutOptions& opts = {});

/// (1/M) sum_i |Y_T^i|^2.
double shooting_loss(const Trajectory& traj);

/// Exact gradient of the shooting loss through the unrolled recursion,
/// including the coupling of the mean-field term across particles.
/// Returns the loss value.
double rollout_backward(const Controls& controls, const GraphonKernel& kernel,
                        const MarketModel& model, const TimeGrid& grid, const Batch& batch,
                        ControlsGrad& grad, const RolloutOptions& opts = {});

ControlsGrad zero_grad(const Controls& c);

}  // namespace graphon

#endif
