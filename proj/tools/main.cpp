// graphon-solver: train and evaluate neural controls for the graphon
// investment game, from a JSON config file.
#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <string>

#include "graphon/config.hpp"
#include "graphon/errors.hpp"
#include "graphon/run.hpp"

namespace {

struct Cli {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool no_plots = false;
};

int execute(const Cli& cli, const char* forced_mode) {
    graphon::RunConfig cfg;
    try {
        cfg = graphon::load_config_file(cli.config_path);
        if (forced_mode) cfg.mode = graphon::run_mode_from_string(forced_mode);
        if (cli.seed_set) {
            cfg.seed = cli.seed;
            cfg.train.loop.seed = cli.seed;
        }
        if (!cli.out_dir.empty()) cfg.out_dir = cli.out_dir;
        if (cli.no_plots) cfg.plots = false;
    } catch (const graphon::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const graphon::IoError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    }
    try {
        const graphon::RunManifest manifest = graphon::run(cfg);
        std::printf("%s: wrote %zu files to %s\n", to_string(cfg.mode).c_str(),
                    manifest.files.size(), cfg.out_dir.c_str());
        return 0;
    } catch (const graphon::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

void add_common(CLI::App* sub, Cli& cli) {
    sub->add_option("--config", cli.config_path, "JSON config file")->required();
    sub->add_option("--seed", cli.seed, "override the config seed")
        ->each([&cli](const std::string&) { cli.seed_set = true; });
    sub->add_option("--out", cli.out_dir, "override the output directory");
    sub->add_flag("--no-plots", cli.no_plots, "skip SVG plot generation");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Graphon-game equilibrium solver"};
    app.require_subcommand(0, 1);

    Cli cli;
    const char* modes[] = {"train", "evaluate", "exploitability", "oracle-compare", "sweep-M"};
    const char* help[] = {"train equilibrium controls and evaluate them",
                          "roll out a saved checkpoint and write metrics",
                          "measure the best-response exploitability gap",
                          "emit closed-form reference paths (and compare a checkpoint)",
                          "repeat training over particle counts and seeds"};
    for (int i = 0; i < 5; ++i) add_common(app.add_subcommand(modes[i], help[i]), cli);
    add_common(app.add_subcommand("run", "run with the mode given in the config"), cli);

    CLI11_PARSE(app, argc, argv);

    if (app.get_subcommands().empty()) {
        std::fprintf(stderr, "%s", app.help().c_str());
        return 1;
    }
    const std::string name = app.get_subcommands()[0]->get_name();
    return execute(cli, name == "run" ? nullptr : name.c_str());
}
