#ifndef GRAPHON_EXPLOITABILITY_HPP
#define GRAPHON_EXPLOITABILITY_HPP

#include <Eigen/Core>

#include "graphon/trainer.hpp"

namespace graphon {

/// Roll the trained controls once on `batch` and record the graphon
/// interaction term per (particle, node).
FrozenMeanField freeze_mean_field(const Controls& params, const GraphonKernel& kernel,
                                  const MarketModel& model, const TimeGrid& grid,
                                  const Batch& batch);

/// Train fresh controls against a frozen mean field; the particle system
/// decouples, so this is the deep best response.
TrainReport best_response_train(const FrozenMeanField& frozen, const TrainConfig& cfg,
                                const MarketModel& model, const TimeGrid& grid, Controls init,
                                const OracleY0Fn* oracle = nullptr);

/// Monte Carlo utility of actually *playing* the given z-controls against the
/// frozen field: per label i, the average over `reps` fresh Brownian paths of
/// -exp(-(X_T - A_T^i)/eta(u_i)), where A_T^i = sum_n field(i,n) dt_n is the
/// frozen aggregate accumulated from the interaction term. The y0-network
/// plays no role: this values the strategy as played, so it stays correct for
/// perturbed or suboptimal controls, where reading the value off the y0-net
/// does not. Calls with the same seed share Brownian paths, making utility
/// differences between two controls a common-random-numbers estimate.
/// Requires xi ≡ 0 (otherwise the aggregate picks up a kernel-dependent
/// initial-wealth term the frozen field does not carry).
Eigen::VectorXd play_utilities(const Controls& controls, const FrozenMeanField& frozen,
                               const MarketModel& model, const TimeGrid& grid, int reps,
                               std::uint64_t seed);

struct ExploitabilityReport {
    Eigen::VectorXd labels;
    Eigen::VectorXd v_eq;
    Eigen::VectorXd v_br;
    Eigen::VectorXd gap;  // v_br - v_eq, unclamped
    double average = 0.0;
    // Negative gaps indicate best-response under-training; surfaced, never
    // silently clamped.
    int negative_terms = 0;
    double most_negative = 0.0;
};

/// Average of (V_br - V_eq) over labels.
ExploitabilityReport average_exploitability(const Eigen::VectorXd& labels,
                                            const Eigen::VectorXd& v_eq,
                                            const Eigen::VectorXd& v_br);

}  // namespace graphon

#endif
