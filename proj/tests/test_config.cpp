#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "graphon/config.hpp"
#include "graphon/errors.hpp"
#include "graphon/io.hpp"
#include "graphon/run.hpp"

using namespace graphon;

namespace {

const char* kFullConfig = R"({
  "mode": "train",
  "seed": 42,
  "out_dir": "somewhere",
  "plots": false,
  "graphon": {"kind": "two_block", "a": 2.0, "b": 0.5},
  "model": {
    "kind": "constant_bs", "sigma": 0.1, "theta": 1.0, "rho": 1.0,
    "eta": {"kind": "constant", "value": 3.0},
    "xi": {"kind": "constant", "value": 0.0},
    "T": 1.0, "n_star": 40
  },
  "train": {
    "iterations": 123, "particles": 64, "learning_rate": 0.002,
    "hidden_widths": [8, 8], "per_timestep": true, "eval_period": 10,
    "val_particles": 99, "lr_decay_every": 50, "lr_decay_factor": 0.25
  },
  "eval_particles": 77,
  "br_iterations": 88,
  "sweep_particles": [16, 32],
  "sweep_seeds": [9, 10]
})";

}  // namespace

TEST_CASE("full config parses") {
    const RunConfig cfg = parse_config(kFullConfig);
    CHECK(cfg.mode == RunMode::Train);
    CHECK(cfg.seed == 42);
    CHECK(cfg.out_dir == "somewhere");
    CHECK(!cfg.plots);
    CHECK(cfg.kernel.kind() == GraphonKind::TwoBlock);
    CHECK(cfg.kernel.a() == 2.0);
    CHECK(cfg.model.sigma == 0.1);
    CHECK(cfg.model.eta_spec.value == 3.0);
    CHECK(cfg.horizon == 1.0);
    CHECK(cfg.n_star == 40);
    CHECK(cfg.train.loop.iterations == 123);
    CHECK(cfg.train.loop.seed == 42);  // seed propagates into the loop
    CHECK(cfg.train.hidden_widths == std::vector<int>{8, 8});
    CHECK(cfg.train.per_timestep);
    CHECK(cfg.eval_particles == 77);
    CHECK(cfg.br_iterations == 88);
    CHECK(cfg.sweep_particles == std::vector<int>{16, 32});
    CHECK(cfg.grid().steps() == 40);
}

TEST_CASE("serialize-parse round trip preserves the config") {
    const RunConfig cfg = parse_config(kFullConfig);
    const RunConfig back = parse_config(serialize_config(cfg));
    CHECK(serialize_config(back) == serialize_config(cfg));
    CHECK(back.mode == cfg.mode);
    CHECK(back.seed == cfg.seed);
    CHECK(back.kernel.kind() == cfg.kernel.kind());
    CHECK(back.train.loop.adam.learning_rate == cfg.train.loop.adam.learning_rate);
    CHECK(back.sweep_seeds == cfg.sweep_seeds);
}

TEST_CASE("mandatory fields and unknown kinds are rejected") {
    CHECK_THROWS_AS(parse_config("{"), ConfigError);  // invalid JSON
    CHECK_THROWS_AS(parse_config(R"({"seed": 1})"), ConfigError);  // mode missing
    // seed missing: wall-clock seeding is not an acceptable fallback
    CHECK_THROWS_WITH_AS(parse_config(R"({"mode": "train"})"), doctest::Contains("seed"),
                         ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"mode": "dance", "seed": 1})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"mode": "train", "seed": 1, "graphon": {"kind": "blob"}})"),
                    ConfigError);
    CHECK_THROWS_AS(
        parse_config(R"({"mode": "train", "seed": 1, "model": {"kind": "heston"}})"),
        ConfigError);
    CHECK_THROWS_AS(
        parse_config(
            R"({"mode": "train", "seed": 1, "model": {"eta": {"kind": "cauchy"}}})"),
        ConfigError);
    CHECK_THROWS_AS(
        parse_config(
            R"({"mode": "train", "seed": 1, "model": {"xi": {"kind": "lognormal"}}})"),
        ConfigError);
    // graphon parameter validation propagates
    CHECK_THROWS_AS(
        parse_config(
            R"({"mode": "train", "seed": 1, "graphon": {"kind": "power_law", "gamma": 0.5}})"),
        ConfigError);
    // evaluate requires a checkpoint
    CHECK_THROWS_AS(parse_config(R"({"mode": "evaluate", "seed": 1})"), ConfigError);
    CHECK_NOTHROW(
        parse_config(R"({"mode": "evaluate", "seed": 1, "checkpoint": "c.bin"})"));
}

TEST_CASE("mode names round trip") {
    for (auto m : {RunMode::Train, RunMode::Evaluate, RunMode::Exploitability,
                   RunMode::OracleCompare, RunMode::SweepM})
        CHECK(run_mode_from_string(to_string(m)) == m);
    CHECK_THROWS_AS(run_mode_from_string("unknown"), ConfigError);
}

TEST_CASE("closed-form detection") {
    RunConfig cfg = parse_config(kFullConfig);
    CHECK(has_closed_form(cfg));
    CHECK_NOTHROW(make_oracle(cfg));
    // the oracle matches the two-block values
    CHECK(make_oracle(cfg)(0.2) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(make_oracle(cfg)(0.8) == doctest::Approx(-0.75).epsilon(1e-12));

    cfg.model.kind = MarketKind::MarkovianBS;
    CHECK(!has_closed_form(cfg));
    CHECK_THROWS_AS(make_oracle(cfg), UnsupportedConfigError);

    cfg.model.kind = MarketKind::ConstantBS;
    cfg.model.eta_spec.kind = EtaKind::BetaU;
    CHECK(!has_closed_form(cfg));
}

TEST_CASE("a run writes a manifest whose hashes match the artifacts") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() /
                         ("graphon_cfg_test_" + std::to_string(::getpid()));
    fs::remove_all(dir);

    RunConfig cfg = parse_config(kFullConfig);
    cfg.mode = RunMode::Train;
    cfg.out_dir = (dir / "run1").string();
    cfg.plots = false;
    cfg.train.hidden_widths = {4};
    cfg.train.per_timestep = false;
    cfg.train.loop.iterations = 3;
    cfg.train.loop.particles = 8;
    cfg.train.loop.eval_period = 3;
    cfg.train.loop.val_particles = 8;
    cfg.n_star = 4;
    cfg.eval_particles = 8;

    const RunManifest m1 = run(cfg);
    CHECK(!m1.files.empty());
    for (const auto& [name, hash] : m1.files)
        CHECK(file_hash((fs::path(cfg.out_dir) / name).string()) == hash);

    // Identical seed and config give identical data artifacts.
    cfg.out_dir = (dir / "run2").string();
    const RunManifest m2 = run(cfg);
    REQUIRE(m1.files.size() == m2.files.size());
    for (std::size_t k = 0; k < m1.files.size(); ++k) {
        CHECK(m1.files[k].first == m2.files[k].first);
        if (m1.files[k].first != "config.json")  // differs only in out_dir
            CHECK(m1.files[k].second == m2.files[k].second);
    }
    fs::remove_all(dir);
}
