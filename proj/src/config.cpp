#include "graphon/config.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "graphon/errors.hpp"

namespace graphon {

using nlohmann::json;

RunMode run_mode_from_string(const std::string& name) {
    if (name == "train") return RunMode::Train;
    if (name == "evaluate") return RunMode::Evaluate;
    if (name == "exploitability") return RunMode::Exploitability;
    if (name == "oracle-compare") return RunMode::OracleCompare;
    if (name == "sweep-M") return RunMode::SweepM;
    throw ConfigError("mode: unknown value '" + name + "'");
}

std::string to_string(RunMode m) {
    switch (m) {
        case RunMode::Train: return "train";
        case RunMode::Evaluate: return "evaluate";
        case RunMode::Exploitability: return "exploitability";
        case RunMode::OracleCompare: return "oracle-compare";
        case RunMode::SweepM: return "sweep-M";
    }
    return "?";
}

namespace {

GraphonKernel parse_kernel(const json& j) {
    if (!j.contains("kind")) throw ConfigError("graphon.kind: missing");
    const std::string kind = j.at("kind").get<std::string>();
    try {
        switch (graphon_kind_from_string(kind)) {
            case GraphonKind::Constant:
                return GraphonKernel::constant();
            case GraphonKind::TwoBlock:
                return GraphonKernel::two_block(j.value("a", 1.0), j.value("b", 1.0));
            case GraphonKind::Star:
                return GraphonKernel::star(j.value("c", 1.0), j.value("alpha", 0.5));
            case GraphonKind::MinMax:
                return GraphonKernel::min_max();
            case GraphonKind::PowerLaw:
                return GraphonKernel::power_law(j.value("gamma", -0.5));
        }
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("graphon: ") + e.what());
    }
    throw ConfigError("graphon.kind: unknown value '" + kind + "'");
}

json kernel_to_json(const GraphonKernel& k) {
    json j;
    j["kind"] = to_string(k.kind());
    switch (k.kind()) {
        case GraphonKind::TwoBlock:
            j["a"] = k.a();
            j["b"] = k.b();
            break;
        case GraphonKind::Star:
            j["c"] = k.c();
            j["alpha"] = k.alpha();
            break;
        case GraphonKind::PowerLaw:
            j["gamma"] = k.gamma();
            break;
        default:
            break;
    }
    return j;
}

MarketModel parse_model(const json& j, double* horizon, int* n_star) {
    MarketModel m;
    const std::string kind = j.value("kind", "constant_bs");
    if (kind == "constant_bs")
        m.kind = MarketKind::ConstantBS;
    else if (kind == "markovian_bs")
        m.kind = MarketKind::MarkovianBS;
    else
        throw ConfigError("model.kind: unknown value '" + kind + "'");
    m.sigma = j.value("sigma", 0.1);
    m.theta_const = j.value("theta", 1.0);
    m.rho = j.value("rho", 1.0);
    if (j.contains("eta")) {
        const json& e = j.at("eta");
        const std::string ek = e.value("kind", "constant");
        if (ek == "constant") {
            m.eta_spec.kind = EtaKind::Constant;
            m.eta_spec.value = e.value("value", 3.0);
        } else if (ek == "beta_u_one_minus_u") {
            m.eta_spec.kind = EtaKind::BetaUOneMinusU;
            m.eta_spec.beta = e.value("beta", 1.0);
        } else if (ek == "beta_u") {
            m.eta_spec.kind = EtaKind::BetaU;
            m.eta_spec.beta = e.value("beta", 1.0);
        } else {
            throw ConfigError("model.eta.kind: unknown value '" + ek + "'");
        }
    }
    if (j.contains("xi")) {
        const json& x = j.at("xi");
        if (x.value("kind", "constant") != "constant")
            throw ConfigError("model.xi.kind: only 'constant' is supported");
        m.xi_const = x.value("value", 0.0);
    }
    *horizon = j.value("T", 1.0);
    *n_star = j.value("n_star", 40);
    m.validate();
    return m;
}

json model_to_json(const MarketModel& m, double horizon, int n_star) {
    json j;
    j["kind"] = m.kind == MarketKind::ConstantBS ? "constant_bs" : "markovian_bs";
    j["sigma"] = m.sigma;
    j["theta"] = m.theta_const;
    j["rho"] = m.rho;
    json e;
    switch (m.eta_spec.kind) {
        case EtaKind::Constant:
            e["kind"] = "constant";
            e["value"] = m.eta_spec.value;
            break;
        case EtaKind::BetaUOneMinusU:
            e["kind"] = "beta_u_one_minus_u";
            e["beta"] = m.eta_spec.beta;
            break;
        case EtaKind::BetaU:
            e["kind"] = "beta_u";
            e["beta"] = m.eta_spec.beta;
            break;
    }
    j["eta"] = e;
    j["xi"] = {{"kind", "constant"}, {"value", m.xi_const}};
    j["T"] = horizon;
    j["n_star"] = n_star;
    return j;
}

TrainBlock parse_train(const json& j) {
    TrainBlock t;
    t.loop.iterations = j.value("iterations", 10000);
    t.loop.particles = j.value("particles", 512);
    t.loop.adam.learning_rate = j.value("learning_rate", 1e-3);
    t.loop.adam.beta1 = j.value("beta1", 0.9);
    t.loop.adam.beta2 = j.value("beta2", 0.999);
    t.loop.adam.epsilon = j.value("epsilon", 1e-8);
    t.loop.eval_period = j.value("eval_period", 100);
    t.loop.val_particles = j.value("val_particles", 4096);
    t.loop.val_seed = j.value("val_seed", 0ull);
    t.loop.lr_decay_every = j.value("lr_decay_every", 0);
    t.loop.lr_decay_factor = j.value("lr_decay_factor", 0.5);
    if (j.contains("hidden_widths")) t.hidden_widths = j.at("hidden_widths").get<std::vector<int>>();
    t.per_timestep = j.value("per_timestep", false);
    return t;
}

json train_to_json(const TrainBlock& t) {
    json j;
    j["iterations"] = t.loop.iterations;
    j["particles"] = t.loop.particles;
    j["learning_rate"] = t.loop.adam.learning_rate;
    j["beta1"] = t.loop.adam.beta1;
    j["beta2"] = t.loop.adam.beta2;
    j["epsilon"] = t.loop.adam.epsilon;
    j["eval_period"] = t.loop.eval_period;
    j["val_particles"] = t.loop.val_particles;
    j["val_seed"] = t.loop.val_seed;
    j["lr_decay_every"] = t.loop.lr_decay_every;
    j["lr_decay_factor"] = t.loop.lr_decay_factor;
    j["hidden_widths"] = t.hidden_widths;
    j["per_timestep"] = t.per_timestep;
    return j;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    RunConfig cfg;
    if (!j.contains("mode")) throw ConfigError("mode: missing");
    cfg.mode = run_mode_from_string(j.at("mode").get<std::string>());
    if (!j.contains("seed")) throw ConfigError("seed: missing (wall-clock seeding is not allowed)");
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.out_dir = j.value("out_dir", "out");
    cfg.plots = j.value("plots", true);
    if (j.contains("graphon")) cfg.kernel = parse_kernel(j.at("graphon"));
    if (j.contains("model")) cfg.model = parse_model(j.at("model"), &cfg.horizon, &cfg.n_star);
    if (j.contains("train")) cfg.train = parse_train(j.at("train"));
    cfg.train.loop.seed = cfg.seed;
    cfg.checkpoint = j.value("checkpoint", "");
    cfg.eval_particles = j.value("eval_particles", 4096);
    cfg.br_iterations = j.value("br_iterations", 5000);
    if (j.contains("sweep_particles"))
        cfg.sweep_particles = j.at("sweep_particles").get<std::vector<int>>();
    if (j.contains("sweep_seeds"))
        cfg.sweep_seeds = j.at("sweep_seeds").get<std::vector<std::uint64_t>>();

    if (cfg.mode == RunMode::Evaluate && cfg.checkpoint.empty())
        throw ConfigError("checkpoint: required for evaluate mode");
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
    json j;
    j["mode"] = to_string(cfg.mode);
    j["seed"] = cfg.seed;
    j["out_dir"] = cfg.out_dir;
    j["plots"] = cfg.plots;
    j["graphon"] = kernel_to_json(cfg.kernel);
    j["model"] = model_to_json(cfg.model, cfg.horizon, cfg.n_star);
    j["train"] = train_to_json(cfg.train);
    if (!cfg.checkpoint.empty()) j["checkpoint"] = cfg.checkpoint;
    j["eval_particles"] = cfg.eval_particles;
    j["br_iterations"] = cfg.br_iterations;
    j["sweep_particles"] = cfg.sweep_particles;
    j["sweep_seeds"] = cfg.sweep_seeds;
    return j.dump(2) + "\n";
}

}  // namespace graphon
