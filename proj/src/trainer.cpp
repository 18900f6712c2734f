#include "graphon/trainer.hpp"

#include <chrono>
#include <cmath>

#include "graphon/errors.hpp"

namespace graphon {

void TrainConfig::validate() const {
    if (iterations < 1) throw ConfigError("TrainConfig: iterations must be >= 1");
    if (particles < 2) throw ConfigError("TrainConfig: need at least 2 particles");
    if (eval_period < 1) throw ConfigError("TrainConfig: eval_period must be >= 1");
    if (val_particles < 1) throw ConfigError("TrainConfig: val_particles must be >= 1");
    if (adam.learning_rate <= 0.0) throw ConfigError("TrainConfig: learning rate must be positive");
    if (z_lr_scale <= 0.0) throw ConfigError("TrainConfig: z_lr_scale must be positive");
}

double validation_relative_error(const Controls& params, const OracleY0Fn& oracle,
                                 const Eigen::VectorXd& labels, double xi) {
    const int m = static_cast<int>(labels.size());
    Eigen::MatrixXd in(2, m);
    in.row(0) = labels.transpose();
    in.row(1).setConstant(xi);
    const Eigen::MatrixXd out = params.y0_net.forward_batch(in);
    double sum = 0.0;
    int used = 0;
    for (int i = 0; i < m; ++i) {
        const double ref = oracle(labels(i));
        if (std::abs(ref) < 1e-12) continue;
        sum += std::abs(out(0, i) - ref) / std::abs(ref);
        ++used;
    }
    if (used == 0) throw UnsupportedConfigError("validation_relative_error: oracle vanishes at every label");
    return 100.0 * sum / used;
}

TrainReport train(const TrainConfig& cfg, const GraphonKernel& kernel, const MarketModel& model,
                  const TimeGrid& grid, Controls init, const OracleY0Fn* oracle,
                  const FrozenMeanField* frozen) {
    cfg.validate();
    model.validate();
    const auto t_start = std::chrono::steady_clock::now();

    std::mt19937_64 rng(cfg.seed);
    std::mt19937_64 val_rng(cfg.val_seed);

    // Fixed validation batch: equispaced labels so error curves over u are
    // smooth. In frozen-field mode the frozen batch itself is the validation
    // set, since the field is only defined on its labels.
    Batch val_batch;
    RolloutOptions val_opts;
    if (frozen) {
        val_batch = frozen->batch;
        val_opts.frozen_mean_field = &frozen->field;
    } else {
        val_batch = sample_label_grid_batch(model, grid, cfg.val_particles, val_rng);
    }

    Controls params = std::move(init);
    ControlsAdam opt = ControlsAdam::init(params, cfg.adam);
    ControlsGrad grad = zero_grad(params);

    double lr = cfg.adam.learning_rate;
    const auto apply_lr = [&] {
        opt.y0.cfg.learning_rate = lr;
        for (auto& s : opt.z) s.cfg.learning_rate = lr * cfg.z_lr_scale;
    };
    apply_lr();

    TrainReport report;
    double last_train_loss = 0.0;
    for (int k = 0; k < cfg.iterations; ++k) {
        if (cfg.lr_decay_every > 0 && k > 0 && k % cfg.lr_decay_every == 0) {
            lr *= cfg.lr_decay_factor;
            apply_lr();
        }

        Batch batch;
        RolloutOptions opts;
        if (frozen) {
            // Labels and the interaction field stay fixed; only the noise is
            // resampled, per the frozen-mean-field training problem.
            batch = frozen->batch;
            const int steps = grid.steps();
            std::normal_distribution<double> normal(0.0, 1.0);
            for (int n = 0; n < steps; ++n) {
                const double sd = std::sqrt(grid.dt(n));
                for (int i = 0; i < batch.particles(); ++i) {
                    batch.dw(i, n) = sd * normal(rng);
                    batch.w(i, n + 1) = batch.w(i, n) + batch.dw(i, n);
                }
            }
            opts.frozen_mean_field = &frozen->field;
        } else {
            batch = sample_batch(model, grid, cfg.particles, rng);
        }

        for (auto& z : grad.z) z.setZero();
        grad.y0.setZero();
        try {
            last_train_loss = rollout_backward(params, kernel, model, grid, batch, grad, opts);
        } catch (const NumericError& e) {
            throw NumericError("training aborted at iteration " + std::to_string(k) + ": " +
                               e.what());
        }
        if (!std::isfinite(last_train_loss))
            throw NumericError("training aborted at iteration " + std::to_string(k) +
                               ": non-finite loss");
        adam_step(params, grad, opt);

        if ((k + 1) % cfg.eval_period == 0 || k + 1 == cfg.iterations) {
            if (!report.history.empty() && report.history.back().iteration == k + 1) continue;
            EvalPoint pt;
            pt.iteration = k + 1;
            pt.train_loss = last_train_loss;
            pt.val_loss = shooting_loss(rollout(params, kernel, model, grid, val_batch, val_opts));
            if (oracle)
                pt.val_rel_error_pct =
                    validation_relative_error(params, *oracle, val_batch.labels, model.xi_const);
            report.history.push_back(pt);
        }
    }

    report.params = std::move(params);
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return report;
}

}  // namespace graphon
