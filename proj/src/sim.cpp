#include "graphon/sim.hpp"

#include <cmath>
#include <string>

#include "graphon/errors.hpp"

namespace graphon {

Controls Controls::make(const std::vector<int>& hidden_widths, bool per_timestep, int n_star,
                        std::mt19937_64& rng) {
    MlpSpec y0_spec;
    y0_spec.input_dim = 2;  // (u, X_0)
    y0_spec.hidden_widths = hidden_widths;
    y0_spec.output_dim = 1;

    MlpSpec z_spec = y0_spec;
    z_spec.input_dim = per_timestep ? 2 : 3;  // (u, X) or (t/T, u, X)

    Controls c;
    c.per_timestep = per_timestep;
    c.y0_net = Mlp::glorot(y0_spec, rng);
    const int count = per_timestep ? n_star : 1;
    for (int k = 0; k < count; ++k) c.z_nets.push_back(Mlp::glorot(z_spec, rng));
    return c;
}

std::vector<Mlp> Controls::all_nets() const {
    std::vector<Mlp> nets;
    nets.push_back(y0_net);
    for (const auto& z : z_nets) nets.push_back(z);
    return nets;
}

Controls Controls::from_nets(std::vector<Mlp> nets, bool per_timestep) {
    if (nets.size() < 2) throw ConfigError("Controls: checkpoint must hold y0-net and z-net(s)");
    Controls c;
    c.per_timestep = per_timestep;
    c.y0_net = std::move(nets[0]);
    c.z_nets.assign(std::make_move_iterator(nets.begin() + 1),
                    std::make_move_iterator(nets.end()));
    if (!per_timestep && c.z_nets.size() != 1)
        throw ConfigError("Controls: single-network mode expects exactly one z-net");
    return c;
}

ControlsAdam ControlsAdam::init(const Controls& c, const AdamConfig& cfg) {
    ControlsAdam s;
    s.y0 = AdamState::init(c.y0_net, cfg);
    for (const auto& z : c.z_nets) s.z.push_back(AdamState::init(z, cfg));
    return s;
}

void ControlsAdam::set_learning_rate(double lr) {
    y0.cfg.learning_rate = lr;
    for (auto& s : z) s.cfg.learning_rate = lr;
}

void adam_step(Controls& c, const ControlsGrad& g, ControlsAdam& state) {
    adam_step(c.y0_net, g.y0, state.y0);
    for (std::size_t k = 0; k < c.z_nets.size(); ++k) adam_step(c.z_nets[k], g.z[k], state.z[k]);
}

ControlsGrad zero_grad(const Controls& c) {
    ControlsGrad g;
    g.y0 = c.y0_net.zero_grad();
    for (const auto& z : c.z_nets) g.z.push_back(z.zero_grad());
    return g;
}

double mean_field_term(const GraphonKernel& kernel, const MarketModel& model,
                       const TimeGrid& grid, double t, const Batch& batch,
                       const Eigen::VectorXd& z_values, double u) {
    const int m = batch.particles();
    if (z_values.size() != m) throw ShapeError("mean_field_term: z_values do not match batch");
    if (m == 0) return 0.0;
    const int node = grid.node_index(t);
    double sum = 0.0;
    for (int j = 0; j < m; ++j) {
        const double v = batch.labels(j);
        const double th = model.kind == MarketKind::ConstantBS ? model.theta_const
                                                               : batch.w(j, node);
        sum += model.rho * (z_values(j) + model.eta(v) * th) * th * kernel.eval(u, v);
    }
    return sum / m;
}

namespace {

struct RolloutWorkspace {
    Eigen::VectorXd eta;            // M
    Eigen::MatrixXd weights;        // M x M graphon weights (empty if frozen field)
    std::vector<MlpCache> z_cache;  // per step
    std::vector<Eigen::MatrixXd> z_inputs;
};

Eigen::MatrixXd z_input(const Controls& c, const TimeGrid& grid, const Batch& batch, int node,
                        const Eigen::Ref<const Eigen::VectorXd>& x) {
    const int m = batch.particles();
    if (c.per_timestep) {
        Eigen::MatrixXd in(2, m);
        in.row(0) = batch.labels.transpose();
        in.row(1) = x.transpose();
        return in;
    }
    Eigen::MatrixXd in(3, m);
    in.row(0).setConstant(grid.nodes[node] / grid.horizon);
    in.row(1) = batch.labels.transpose();
    in.row(2) = x.transpose();
    return in;
}

void check_finite(const Eigen::VectorXd& v, double threshold, const char* what, int node) {
    for (int i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v(i)) || std::abs(v(i)) > threshold)
            throw NumericError(std::string("rollout blow-up: |") + what + "| at particle " +
                               std::to_string(i) + ", step " + std::to_string(node));
    }
}

// Shared forward pass; fills the trajectory and, when ws != nullptr, the
// caches needed for the backward pass.
Trajectory roll_forward(const Controls& controls, const GraphonKernel& kernel,
                        const MarketModel& model, const TimeGrid& grid, const Batch& batch,
                        const RolloutOptions& opts, RolloutWorkspace* ws,
                        MlpCache* y0_cache) {
    model.validate();
    const int m = batch.particles();
    const int steps = grid.steps();
    if (opts.frozen_mean_field &&
        (opts.frozen_mean_field->rows() != m || opts.frozen_mean_field->cols() != steps))
        throw ShapeError("rollout: frozen mean field does not match batch/grid");

    Eigen::VectorXd eta(m);
    for (int i = 0; i < m; ++i) eta(i) = model.eta(batch.labels(i));

    Eigen::MatrixXd weights;
    if (!opts.frozen_mean_field) weights = kernel.weight_matrix(batch.labels);
    if (ws) {
        ws->eta = eta;
        ws->weights = weights;
        ws->z_cache.resize(steps);
        ws->z_inputs.resize(steps);
    }

    Trajectory traj;
    traj.labels = batch.labels;
    traj.x.resize(m, steps + 1);
    traj.y.resize(m, steps + 1);
    traj.z.resize(m, steps);
    traj.pi.resize(m, steps);
    traj.mf.resize(m, steps);

    traj.x.col(0) = batch.x0;

    Eigen::MatrixXd y0_in(2, m);
    y0_in.row(0) = batch.labels.transpose();
    y0_in.row(1) = batch.x0.transpose();
    traj.y.col(0) = controls.y0_net.forward_batch(y0_in, y0_cache).transpose();

    for (int n = 0; n < steps; ++n) {
        const double dt = grid.dt(n);
        const Eigen::VectorXd theta = theta_column(model, batch, n);
        Eigen::MatrixXd zin = z_input(controls, grid, batch, n, traj.x.col(n));
        MlpCache local_cache;
        MlpCache* cache = ws ? &ws->z_cache[n] : &local_cache;
        const Eigen::VectorXd z =
            controls.z_net(n).forward_batch(zin, cache).transpose();
        if (ws) ws->z_inputs[n] = std::move(zin);

        const Eigen::VectorXd risk = z + eta.cwiseProduct(theta);  // z + eta*theta
        Eigen::VectorXd mf;
        if (opts.frozen_mean_field) {
            mf = opts.frozen_mean_field->col(n);
        } else if (m == 1) {
            mf = Eigen::VectorXd::Zero(1);  // no other particles to average over
        } else {
            // Leave-one-out average: conditionally unbiased for the graphon
            // integral, so the trained fixed point carries no O(1/M) bias on
            // block kernels.
            const Eigen::VectorXd q = risk.cwiseProduct(theta);
            mf = (model.rho / (m - 1)) *
                 (weights * q - weights.diagonal().cwiseProduct(q));
        }

        traj.z.col(n) = z;
        traj.pi.col(n) = risk / model.sigma;
        traj.mf.col(n) = mf;

        const Eigen::VectorXd drive = theta * dt + batch.dw.col(n);
        if (opts.freeze_x)
            traj.x.col(n + 1) = traj.x.col(n);
        else
            traj.x.col(n + 1) = traj.x.col(n) + risk.cwiseProduct(drive);
        traj.y.col(n + 1) =
            traj.y.col(n) +
            (z.cwiseProduct(theta) + 0.5 * eta.cwiseProduct(theta.cwiseAbs2()) - mf) * dt +
            z.cwiseProduct(batch.dw.col(n));

        check_finite(traj.x.col(n + 1), opts.blowup_threshold, "X", n);
        check_finite(traj.y.col(n + 1), opts.blowup_threshold, "Y", n);
        check_finite(z, opts.blowup_threshold, "Z", n);
    }
    return traj;
}

}  // namespace

Trajectory rollout(const Controls& controls, const GraphonKernel& kernel,
                   const MarketModel& model, const TimeGrid& grid, const Batch& batch,
                   const RolloutOptions& opts) {
    return roll_forward(controls, kernel, model, grid, batch, opts, nullptr, nullptr);
}

double shooting_loss(const Trajectory& traj) {
    const Eigen::Index last = traj.y.cols() - 1;
    return traj.y.col(last).squaredNorm() / static_cast<double>(traj.y.rows());
}

double rollout_backward(const Controls& controls, const GraphonKernel& kernel,
                        const MarketModel& model, const TimeGrid& grid, const Batch& batch,
                        ControlsGrad& grad, const RolloutOptions& opts) {
    const int m = batch.particles();
    const int steps = grid.steps();

    RolloutWorkspace ws;
    MlpCache y0_cache;
    const Trajectory traj =
        roll_forward(controls, kernel, model, grid, batch, opts, &ws, &y0_cache);
    const double loss = shooting_loss(traj);

    // dL/dY_n^i is constant in n: the Y recursion has unit self-coefficient.
    const Eigen::VectorXd a_y = (2.0 / m) * traj.y.col(steps);

    // Gradient routed into z_j through every particle's mean-field term;
    // constant in n because a_y is, and zero when the field is frozen.
    Eigen::VectorXd g_mf = Eigen::VectorXd::Zero(m);
    if (!opts.frozen_mean_field && m > 1)
        g_mf = (model.rho / (m - 1)) *
               (ws.weights * a_y - ws.weights.diagonal().cwiseProduct(a_y));

    const int x_row = controls.per_timestep ? 1 : 2;
    Eigen::VectorXd a_x = Eigen::VectorXd::Zero(m);
    Eigen::MatrixXd input_grad;

    for (int n = steps - 1; n >= 0; --n) {
        const double dt = grid.dt(n);
        const Eigen::VectorXd theta = theta_column(model, batch, n);
        const Eigen::VectorXd drive = theta * dt + batch.dw.col(n);

        // dL/dz at step n: direct Y term, X propagation, and mean-field coupling.
        Eigen::VectorXd gz = a_y.cwiseProduct(drive) - dt * theta.cwiseProduct(g_mf);
        if (!opts.freeze_x) gz += a_x.cwiseProduct(drive);

        const int net_idx = controls.per_timestep ? n : 0;
        controls.z_net(n).backward_batch_into(ws.z_cache[n], gz.transpose(), grad.z[net_idx],
                                              &input_grad);
        if (!opts.freeze_x) a_x += input_grad.row(x_row).transpose();
    }

    controls.y0_net.backward_batch_into(y0_cache, a_y.transpose(), grad.y0, nullptr);
    return loss;
}

}  // namespace graphon
