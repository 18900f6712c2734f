#include "graphon/run.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "graphon/errors.hpp"
#include "graphon/exploitability.hpp"
#include "graphon/io.hpp"
#include "graphon/metrics.hpp"
#include "graphon/oracle.hpp"
#include "graphon/plots.hpp"

namespace graphon {

namespace fs = std::filesystem;

namespace {

constexpr const char* kArtifactVersion = "0.1.0";

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

ClosedFormParams closed_form_params(const RunConfig& cfg) {
    ClosedFormParams p;
    p.eta = cfg.model.eta_spec.value;
    p.theta = cfg.model.theta_const;
    p.sigma = cfg.model.sigma;
    p.rho = cfg.model.rho;
    p.horizon = cfg.horizon;
    p.kernel = cfg.kernel;
    return p;
}

struct Emitter {
    fs::path dir;
    RunManifest* manifest;

    std::string path(const std::string& name) const { return (dir / name).string(); }

    void track(const std::string& full_path) {
        manifest->files.emplace_back(fs::path(full_path).filename().string(),
                                     file_hash(full_path));
    }
};

void emit_utilities(Emitter& em, const RunConfig& cfg, const Controls& controls,
                    const Eigen::VectorXd& labels) {
    const int m = static_cast<int>(labels.size());
    Eigen::MatrixXd in(2, m);
    in.row(0) = labels.transpose();
    in.row(1).setConstant(cfg.model.xi_const);
    const Eigen::VectorXd y0 = controls.y0_net.forward_batch(in).transpose();
    Eigen::VectorXd utility(m);
    std::vector<bool> degenerate(m, false);
    for (int i = 0; i < m; ++i) {
        const double eta = cfg.model.eta(labels(i));
        if (eta <= 0.0) {
            degenerate[i] = true;
            utility(i) = 0.0;
        } else {
            utility(i) = equilibrium_utility(eta, y0(i));
        }
    }
    const std::string p = em.path("utilities.csv");
    write_utilities_csv(p, labels, y0, utility, degenerate);
    em.track(p);
}

void emit_evaluation(Emitter& em, const RunConfig& cfg, const Controls& controls,
                     const TimeGrid& grid, bool plots) {
    std::mt19937_64 rng(cfg.train.loop.val_seed);
    const Batch batch = sample_label_grid_batch(cfg.model, grid, cfg.eval_particles, rng);
    const Trajectory traj = rollout(controls, cfg.kernel, cfg.model, grid, batch);

    const std::string traj_path = em.path("trajectory.csv");
    write_trajectory_csv(traj_path, grid, traj);
    em.track(traj_path);

    const auto groups = default_groups(cfg.kernel);
    const std::string metrics_path = em.path("metrics.csv");
    write_metrics_csv(metrics_path, grid, wealth_curves(traj, cfg.kernel, groups));
    em.track(metrics_path);

    if (groups.size() >= 2) {
        const auto rep = index_independence_test(traj, groups[0], groups[1]);
        const std::string ind_path = em.path("independence.csv");
        write_independence_csv(ind_path, grid, rep);
        em.track(ind_path);
    }

    emit_utilities(em, cfg, controls, batch.labels);

    if (plots) {
        for (const auto& f : plot_trajectory(read_csv(traj_path), em.path("plot"))) em.track(f);
        for (const auto& f : plot_metrics(read_csv(metrics_path), em.path("plot"))) em.track(f);
        for (const auto& f : plot_utilities(read_csv(em.path("utilities.csv")), em.path("plot")))
            em.track(f);
    }
}

Controls initial_controls(const RunConfig& cfg) {
    std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
    return Controls::make(cfg.train.hidden_widths, cfg.train.per_timestep, cfg.n_star, rng);
}

Controls load_controls(const RunConfig& cfg) {
    return Controls::from_nets(load_networks_file(cfg.checkpoint), cfg.train.per_timestep);
}

void run_train(Emitter& em, const RunConfig& cfg) {
    const TimeGrid grid = cfg.grid();
    OracleY0Fn oracle;
    const OracleY0Fn* oracle_ptr = nullptr;
    if (has_closed_form(cfg)) {
        oracle = make_oracle(cfg);
        oracle_ptr = &oracle;
    }
    TrainReport report =
        train(cfg.train.loop, cfg.kernel, cfg.model, grid, initial_controls(cfg), oracle_ptr);

    const std::string report_path = em.path("train_report.csv");
    write_train_report_csv(report_path, report);
    em.track(report_path);

    const std::string ckpt_path = em.path("checkpoint.bin");
    save_networks_file(ckpt_path, report.params.all_nets());
    em.track(ckpt_path);

    if (cfg.plots)
        for (const auto& f : plot_train_report(read_csv(report_path), em.path("plot"))) em.track(f);

    emit_evaluation(em, cfg, report.params, grid, cfg.plots);
}

void run_evaluate(Emitter& em, const RunConfig& cfg) {
    emit_evaluation(em, cfg, load_controls(cfg), cfg.grid(), cfg.plots);
}

void run_exploitability(Emitter& em, const RunConfig& cfg) {
    const TimeGrid grid = cfg.grid();
    Controls equilibrium =
        cfg.checkpoint.empty()
            ? train(cfg.train.loop, cfg.kernel, cfg.model, grid, initial_controls(cfg)).params
            : load_controls(cfg);

    std::mt19937_64 rng(cfg.train.loop.val_seed);
    const Batch batch =
        sample_label_grid_batch(cfg.model, grid, cfg.train.loop.particles, rng);
    const FrozenMeanField frozen =
        freeze_mean_field(equilibrium, cfg.kernel, cfg.model, grid, batch);

    TrainConfig br_cfg = cfg.train.loop;
    br_cfg.iterations = cfg.br_iterations;
    br_cfg.seed = cfg.seed + 1;
    std::mt19937_64 br_init_rng(cfg.seed ^ 0xda3e39cb94b95bdbull);
    Controls br_init =
        Controls::make(cfg.train.hidden_widths, cfg.train.per_timestep, cfg.n_star, br_init_rng);
    const TrainReport br =
        best_response_train(frozen, br_cfg, cfg.model, grid, std::move(br_init));

    const std::string br_path = em.path("best_response_report.csv");
    write_train_report_csv(br_path, br);
    em.track(br_path);

    // Utilities from Y_0 with xi = 0; degenerate labels are excluded.
    std::vector<double> labels_v, veq_v, vbr_v;
    Eigen::MatrixXd in(2, batch.particles());
    in.row(0) = batch.labels.transpose();
    in.row(1).setConstant(cfg.model.xi_const);
    const Eigen::VectorXd y0_eq = equilibrium.y0_net.forward_batch(in).transpose();
    const Eigen::VectorXd y0_br = br.params.y0_net.forward_batch(in).transpose();
    for (int i = 0; i < batch.particles(); ++i) {
        const double eta = cfg.model.eta(batch.labels(i));
        if (eta <= 0.0) continue;
        labels_v.push_back(batch.labels(i));
        veq_v.push_back(equilibrium_utility(eta, y0_eq(i)));
        vbr_v.push_back(equilibrium_utility(eta, y0_br(i)));
    }
    const auto as_vec = [](const std::vector<double>& v) {
        return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
    };
    const ExploitabilityReport rep =
        average_exploitability(as_vec(labels_v), as_vec(veq_v), as_vec(vbr_v));
    const std::string exp_path = em.path("exploitability.csv");
    write_exploitability_csv(exp_path, rep);
    em.track(exp_path);
}

void run_oracle_compare(Emitter& em, const RunConfig& cfg) {
    if (!has_closed_form(cfg))
        throw UnsupportedConfigError(
            "oracle-compare: no closed form for this model (needs constant_bs with constant eta)");
    const TimeGrid grid = cfg.grid();
    const ClosedFormParams p = closed_form_params(cfg);

    // Oracle paths in the trajectory schema for side-by-side plotting.
    const int m = 64;
    Trajectory oracle_traj;
    oracle_traj.labels.resize(m);
    oracle_traj.x.setZero(m, grid.steps() + 1);
    oracle_traj.y.resize(m, grid.steps() + 1);
    oracle_traj.z.setZero(m, grid.steps());
    oracle_traj.pi.resize(m, grid.steps());
    oracle_traj.mf.resize(m, grid.steps());
    for (int i = 0; i < m; ++i) {
        const double u = (i + 0.5) / m;
        oracle_traj.labels(i) = u;
        for (int n = 0; n <= grid.steps(); ++n) {
            oracle_traj.y(i, n) = closed_form_Y(p, grid.nodes[n], u);
            // E[X_t] = eta * theta^2 * t for the closed-form wealth.
            oracle_traj.x(i, n) = p.eta * p.theta * p.theta * grid.nodes[n];
        }
        for (int n = 0; n < grid.steps(); ++n) {
            oracle_traj.pi(i, n) = closed_form_strategy(p, u);
            oracle_traj.mf(i, n) = p.rho * p.eta * p.theta * p.theta * cfg.kernel.degree(u);
        }
    }
    const std::string oracle_path = em.path("oracle_trajectory.csv");
    write_trajectory_csv(oracle_path, grid, oracle_traj);
    em.track(oracle_path);

    if (!cfg.checkpoint.empty()) {
        const Controls controls = load_controls(cfg);
        const OracleY0Fn oracle = make_oracle(cfg);
        const double err =
            validation_relative_error(controls, oracle, oracle_traj.labels, cfg.model.xi_const);
        std::ofstream out(em.path("oracle_compare.csv"));
        out << "# schema: oracle-compare-v1\nmetric,value\n";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", err);
        out << "val_rel_error_pct," << buf << "\n";
        out.close();
        em.track(em.path("oracle_compare.csv"));
    }
    if (cfg.plots)
        for (const auto& f : plot_trajectory(read_csv(oracle_path), em.path("plot_oracle")))
            em.track(f);
}

void run_sweep_m(Emitter& em, const RunConfig& cfg) {
    const TimeGrid grid = cfg.grid();
    OracleY0Fn oracle;
    const OracleY0Fn* oracle_ptr = nullptr;
    if (has_closed_form(cfg)) {
        oracle = make_oracle(cfg);
        oracle_ptr = &oracle;
    }

    std::ofstream out(em.path("sweep.csv"));
    out << "# schema: sweep-m-v1\nparticles,seed,final_val_loss,final_rel_error_pct,wall_seconds\n";
    std::ofstream summary(em.path("sweep_summary.csv"));
    summary << "# schema: sweep-m-summary-v1\nparticles,mean_rel_error_pct,mean_wall_seconds\n";

    for (int m : cfg.sweep_particles) {
        double err_sum = 0.0, time_sum = 0.0;
        for (std::uint64_t seed : cfg.sweep_seeds) {
            RunConfig rc = cfg;
            rc.seed = seed;
            rc.train.loop.seed = seed;
            rc.train.loop.particles = m;
            const TrainReport report =
                train(rc.train.loop, rc.kernel, rc.model, grid, initial_controls(rc), oracle_ptr);
            const EvalPoint& last = report.history.back();
            char buf[128];
            std::snprintf(buf, sizeof buf, "%d,%llu,%.17g,%.17g,%.6f", m,
                          static_cast<unsigned long long>(seed), last.val_loss,
                          last.val_rel_error_pct, report.wall_seconds);
            out << buf << "\n";
            err_sum += last.val_rel_error_pct;
            time_sum += report.wall_seconds;
        }
        const double count = static_cast<double>(cfg.sweep_seeds.size());
        char buf[96];
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.6f", m, err_sum / count, time_sum / count);
        summary << buf << "\n";
    }
    out.close();
    summary.close();
    em.track(em.path("sweep.csv"));
    em.track(em.path("sweep_summary.csv"));
}

}  // namespace

bool has_closed_form(const RunConfig& cfg) {
    return cfg.model.kind == MarketKind::ConstantBS &&
           cfg.model.eta_spec.kind == EtaKind::Constant;
}

OracleY0Fn make_oracle(const RunConfig& cfg) {
    if (!has_closed_form(cfg))
        throw UnsupportedConfigError("no closed-form oracle for this configuration");
    const ClosedFormParams p = closed_form_params(cfg);
    return [p](double u) { return closed_form_Y(p, 0.0, u); };
}

RunManifest run(const RunConfig& cfg) {
    RunManifest manifest;
    manifest.config_json = serialize_config(cfg);
    manifest.artifact_version = kArtifactVersion;
    manifest.started_at = utc_now();

    fs::create_directories(cfg.out_dir);
    Emitter em{fs::path(cfg.out_dir), &manifest};

    const std::string cfg_path = em.path("config.json");
    {
        std::ofstream out(cfg_path);
        out << manifest.config_json;
    }
    em.track(cfg_path);

    switch (cfg.mode) {
        case RunMode::Train: run_train(em, cfg); break;
        case RunMode::Evaluate: run_evaluate(em, cfg); break;
        case RunMode::Exploitability: run_exploitability(em, cfg); break;
        case RunMode::OracleCompare: run_oracle_compare(em, cfg); break;
        case RunMode::SweepM: run_sweep_m(em, cfg); break;
    }

    manifest.finished_at = utc_now();
    nlohmann::json j;
    j["artifact_version"] = manifest.artifact_version;
    j["started_at"] = manifest.started_at;
    j["finished_at"] = manifest.finished_at;
    j["config"] = nlohmann::json::parse(manifest.config_json);
    nlohmann::json files = nlohmann::json::array();
    for (const auto& [name, hash] : manifest.files) files.push_back({{"name", name}, {"fnv1a64", hash}});
    j["files"] = files;
    std::ofstream out(em.path("manifest.json"));
    out << j.dump(2) << "\n";
    return manifest;
}

}  // namespace graphon
