#ifndef GRAPHON_CONFIG_HPP
#define GRAPHON_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "graphon/kernels.hpp"
#include "graphon/market.hpp"
#include "graphon/trainer.hpp"

namespace graphon {

enum class RunMode { Train, Evaluate, Exploitability, OracleCompare, SweepM };

RunMode run_mode_from_string(const std::string& name);
std::string to_string(RunMode m);

/// Network and loop settings from the "train" config block.
struct TrainBlock {
    TrainConfig loop;
    std::vector<int> hidden_widths = {64, 64, 64};
    bool per_timestep = false;
};

/// Full run description, parsed from a JSON config file.
struct RunConfig {
    RunMode mode = RunMode::Train;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    bool plots = true;

    GraphonKernel kernel = GraphonKernel::constant();
    MarketModel model;
    double horizon = 1.0;
    int n_star = 40;

    TrainBlock train;

    // evaluate / exploitability / oracle-compare
    std::string checkpoint;
    int eval_particles = 4096;

    // exploitability
    int br_iterations = 5000;

    // sweep-M
    std::vector<int> sweep_particles = {128, 512, 2048};
    std::vector<std::uint64_t> sweep_seeds = {1, 2, 3, 4};

    TimeGrid grid() const { return TimeGrid::equidistant(horizon, n_star); }
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config_file(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

}  // namespace graphon

#endif
