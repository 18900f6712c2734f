#ifndef GRAPHON_TRAINER_HPP
#define GRAPHON_TRAINER_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "graphon/kernels.hpp"
#include "graphon/market.hpp"
#include "graphon/sim.hpp"

namespace graphon {

struct TrainConfig {
    int iterations = 10000;
    int particles = 512;
    AdamConfig adam;
    int eval_period = 100;
    int val_particles = 4096;
    std::uint64_t val_seed = 0;
    std::uint64_t seed = 1;
    // Optional step decay of the learning rate; 0 keeps it constant.
    int lr_decay_every = 0;
    double lr_decay_factor = 0.5;
    // Learning-rate multiplier for the z-networks. Values below 1 damp the
    // random walk of the z residual, whose batch average feeds back into the
    // interaction term and drags y0 with it.
    double z_lr_scale = 1.0;

    void validate() const;
};

struct EvalPoint {
    int iteration = 0;
    double train_loss = 0.0;
    double val_loss = 0.0;
    double val_rel_error_pct = -1.0;  // negative when no oracle is configured
};

struct TrainReport {
    std::vector<EvalPoint> history;
    Controls params;
    double wall_seconds = 0.0;
};

/// Closed-form Y_0 as a function of the label, used for validation errors.
using OracleY0Fn = std::function<double(double)>;

/// A mean-field trajectory frozen on a fixed batch of labels; training
/// against it decouples the particles.
struct FrozenMeanField {
    Batch batch;
    Eigen::MatrixXd field;  // M x n_star
};

/// Shooting-method training loop: per iteration sample a batch, roll out,
/// backpropagate, take one Adam step. Validation runs on a fixed batch with
/// equispaced labels every eval_period iterations.
TrainReport train(const TrainConfig& cfg, const GraphonKernel& kernel, const MarketModel& model,
                  const TimeGrid& grid, Controls init, const OracleY0Fn* oracle = nullptr,
                  const FrozenMeanField* frozen = nullptr);

/// Mean over labels of |y0_net(u, xi) - oracle(u)| / |oracle(u)| in percent;
/// labels where the oracle is below 1e-12 in magnitude are skipped.
double validation_relative_error(const Controls& params, const OracleY0Fn& oracle,
                                 const Eigen::VectorXd& labels, double xi);

}  // namespace graphon

#endif
