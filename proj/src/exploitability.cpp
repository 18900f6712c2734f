#include "graphon/exploitability.hpp"

#include <cmath>
#include <random>

#include "graphon/errors.hpp"

namespace graphon {

FrozenMeanField freeze_mean_field(const Controls& params, const GraphonKernel& kernel,
                                  const MarketModel& model, const TimeGrid& grid,
                                  const Batch& batch) {
    const Trajectory traj = rollout(params, kernel, model, grid, batch);
    FrozenMeanField frozen;
    frozen.batch = batch;
    frozen.field = traj.mf;
    return frozen;
}

TrainReport best_response_train(const FrozenMeanField& frozen, const TrainConfig& cfg,
                                const MarketModel& model, const TimeGrid& grid, Controls init,
                                const OracleY0Fn* oracle) {
    // Kernel is unused when the field is frozen; pass a placeholder.
    return train(cfg, GraphonKernel::constant(), model, grid, std::move(init), oracle, &frozen);
}

Eigen::VectorXd play_utilities(const Controls& controls, const FrozenMeanField& frozen,
                               const MarketModel& model, const TimeGrid& grid, int reps,
                               std::uint64_t seed) {
    if (reps < 1) throw ConfigError("play_utilities: reps must be >= 1");
    if (model.xi_const != 0.0)
        throw UnsupportedConfigError("play_utilities: requires xi = 0");
    const int m = frozen.batch.particles();
    const int steps = grid.steps();
    if (frozen.field.rows() != m || frozen.field.cols() != steps)
        throw ShapeError("play_utilities: frozen field does not match its batch");

    // Replicate every label `reps` times with fresh Brownian noise; the frozen
    // field row is shared by all copies of a label.
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Batch big;
    big.labels.resize(m * reps);
    big.x0 = Eigen::VectorXd::Zero(m * reps);
    big.dw.resize(m * reps, steps);
    big.w.resize(m * reps, steps + 1);
    big.w.col(0).setZero();
    Eigen::MatrixXd field(m * reps, steps);
    for (int r = 0; r < reps; ++r) {
        big.labels.segment(static_cast<Eigen::Index>(r) * m, m) = frozen.batch.labels;
        field.middleRows(static_cast<Eigen::Index>(r) * m, m) = frozen.field;
    }
    for (int n = 0; n < steps; ++n) {
        const double sd = std::sqrt(grid.dt(n));
        for (int i = 0; i < m * reps; ++i) {
            big.dw(i, n) = sd * normal(rng);
            big.w(i, n + 1) = big.w(i, n) + big.dw(i, n);
        }
    }

    RolloutOptions opts;
    opts.frozen_mean_field = &field;
    const Trajectory traj =
        rollout(controls, GraphonKernel::constant(), model, grid, big, opts);

    // Aggregate accumulated from the frozen interaction term (xi = 0 makes the
    // initial-wealth part vanish).
    Eigen::VectorXd a_T(m);
    for (int i = 0; i < m; ++i) {
        double acc = 0.0;
        for (int n = 0; n < steps; ++n) acc += frozen.field(i, n) * grid.dt(n);
        a_T(i) = acc;
    }

    Eigen::VectorXd v = Eigen::VectorXd::Zero(m);
    const Eigen::VectorXd x_T = traj.x.col(steps);
    for (int r = 0; r < reps; ++r)
        for (int i = 0; i < m; ++i)
            v(i) -= std::exp(-(x_T(static_cast<Eigen::Index>(r) * m + i) - a_T(i)) /
                             model.eta(frozen.batch.labels(i)));
    return v / reps;
}

ExploitabilityReport average_exploitability(const Eigen::VectorXd& labels,
                                            const Eigen::VectorXd& v_eq,
                                            const Eigen::VectorXd& v_br) {
    if (v_eq.size() != v_br.size() || labels.size() != v_eq.size())
        throw ShapeError("average_exploitability: utility vectors differ in length");
    ExploitabilityReport rep;
    rep.labels = labels;
    rep.v_eq = v_eq;
    rep.v_br = v_br;
    rep.gap = v_br - v_eq;
    rep.average = rep.gap.size() > 0 ? rep.gap.mean() : 0.0;
    for (Eigen::Index i = 0; i < rep.gap.size(); ++i) {
        if (rep.gap(i) < 0.0) {
            ++rep.negative_terms;
            rep.most_negative = std::min(rep.most_negative, rep.gap(i));
        }
    }
    return rep;
}

}  // namespace graphon
