#ifndef GRAPHON_RUN_HPP
#define GRAPHON_RUN_HPP

#include <string>
#include <utility>
#include <vector>

#include "graphon/config.hpp"

namespace graphon {

/// What a run produced: config snapshot, timing, and every emitted file with
/// its content hash.
struct RunManifest {
    std::string config_json;
    std::string artifact_version;
    std::string started_at;
    std::string finished_at;
    std::vector<std::pair<std::string, std::string>> files;  // (name, hash)
};

/// Execute one configured run end to end and write its artifacts (CSVs,
/// checkpoint, plots, manifest.json) under cfg.out_dir.
RunManifest run(const RunConfig& cfg);

/// Closed-form Y_0 oracle when the configuration admits one
/// (constant-coefficient Black-Scholes with constant eta).
bool has_closed_form(const RunConfig& cfg);
OracleY0Fn make_oracle(const RunConfig& cfg);

}  // namespace graphon

#endif
